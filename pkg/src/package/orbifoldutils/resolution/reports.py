"""
Copyright 2024 Google LLC

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""
"""Report models written by the toolkit
   2024 Google
"""
# Standard library imports
from typing import Any, Dict, List, Optional
import toml
import pkgutil

# Third-party imports
from pydantic import BaseModel, ConfigDict, Field

# Load constants
constants = toml.loads(pkgutil.get_data(__name__, "constants.toml").decode())


class PropertyMargin(BaseModel):
    name: str
    margin: float
    passed: bool


class EtaCertificate(BaseModel):
    """Worst case margins of one eta_{tau,delta}."""

    tau: float
    delta: float
    weight: float
    tau_of_delta: float
    divisor: int
    grid_size: int
    margins: List[PropertyMargin]

    @property
    def certified(self):
        return all(m.passed for m in self.margins)


class WitnessReport(BaseModel):
    """First delta of a ladder whose resolved profile clears the curvature floor."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    m_minus: int
    m_plus: int
    tau: float
    delta: float
    weight: float
    weight_mode: str
    tau_of_delta: float
    min_curvature: float
    argmin: float
    tip_slope: float
    tip_second_derivative: float
    margins: Dict[str, float] = Field(
        default_factory=dict, description="Curvature minus floor per tried delta, -Infinity where eta could not be built."
    )


class CheckResult(BaseModel):
    """A single numeric check against its tolerance."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    name: str
    value: float
    tolerance: float
    passed: bool


class ProfileSummary(BaseModel):
    m_minus: int
    m_plus: int
    min_curvature_gap: float
    argmin: float
    slope_at_zero: float
    slope_at_half_pi: float
    rows: int


class GHLevel(BaseModel):
    tau: float
    delta: Optional[float] = None
    grid: int
    upper_bound: float
    max_distance_deviation: float
    min_curvature: Optional[float] = None


class GHReport(BaseModel):
    """Convergence study of resolved surfaces against the unresolved space."""

    m_minus: int
    m_plus: int
    levels: List[GHLevel]
    monotone: bool = Field(description="Every bound is strictly below the one before it.")
    halving_ratio: float = Field(description="Last bound over first bound, 1 for a single level.")
    halved: bool = Field(description="The last bound is at most half the first.")
    metrication_floor: float = Field(description="Half the largest graph distance error on the round sphere at the grid.")


class RunReport(BaseModel):
    """Top level JSON document of every command."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    schema_version: str = constants["CLI"]["SCHEMA_VERSION"]
    command: str
    seed: int
    config: Dict[str, Any] = Field(default_factory=dict)
    profile: Optional[ProfileSummary] = None
    certificate: Optional[EtaCertificate] = None
    witness: Optional[WitnessReport] = None
    checks: List[CheckResult] = Field(default_factory=list)
    gh: Optional[GHReport] = None

    @property
    def passed(self):
        return all(check.passed for check in self.checks)


def report_schema():
    """JSON schema of RunReport."""
    return RunReport.model_json_schema()
