#!/usr/bin/env python
# -*- coding: utf-8 -*-
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
"""CLI interface to the orbifold resolution toolkit
   2024 Google
"""

# Standard library imports
import argparse
import json
import logging
import math
import os
import sys
import tempfile
from typing import List, Literal, Optional
import pkgutil

# Third-party imports
import numpy as np
import pandas as pd
import toml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from orbifoldutils.resolution import Client, ClientOptions
from orbifoldutils.resolution.charts import ChartMetric, warped_chart
from orbifoldutils.resolution.exceptions import (
    InputValidationError,
    OracleDisagreementError,
    WitnessNotFoundError,
)
from orbifoldutils.resolution.profiles import ProfileFunction, sine_profile
from orbifoldutils.resolution.quotient_operations import HALF_PI, WeightedQuotientProfile
from orbifoldutils.resolution.reports import CheckResult, ProfileSummary, RunReport, report_schema

constants = toml.loads(pkgutil.get_data("orbifoldutils.resolution", "constants.toml").decode())
EXIT_CODES = constants["EXIT_CODES"]
FLOAT_FORMAT = constants["CLI"]["FLOAT_FORMAT"]

# Setup logging
logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)


class RunConfig(BaseModel):
    """Parameters of one command, from the config file overlaid by flags."""

    model_config = ConfigDict(extra="forbid")

    command: Literal["profile", "resolve", "verify", "gh", "schema"]
    m_minus: int = Field(default=2, ge=1)
    m_plus: int = Field(default=3, ge=1)
    grid: int = Field(default=constants["QUOTIENT"]["THETA_GRID"], ge=2)
    tau: float = Field(default=0.3, gt=0.0, lt=math.pi / 4.0)
    delta_ladder: List[float] = Field(default_factory=lambda: list(constants["ETA"]["DELTA_LADDER"]))
    weight_mode: Literal["quotient", "branched"] = constants["WEIGHT_MODE"]["QUOTIENT"]
    tau_ladder: List[float] = Field(default_factory=lambda: list(constants["GH"]["TAU_LADDER"]))
    gh_grid: int = Field(default=constants["GH"]["GRID"], ge=4)
    suite: Optional[str] = None
    out_dir: str = "."
    seed: int = constants["CLI"]["SEED"]

    @field_validator("delta_ladder", "tau_ladder")
    @classmethod
    def _descending_positive(cls, ladder):
        if not ladder or any(value <= 0.0 for value in ladder):
            raise ValueError(f"ladder {ladder} must be non-empty and positive")
        if ladder != sorted(ladder, reverse=True):
            raise ValueError(f"ladder {ladder} must be descending")
        return ladder

    @field_validator("tau_ladder")
    @classmethod
    def _tau_range(cls, ladder):
        if any(value >= math.pi / 4.0 for value in ladder):
            raise ValueError(f"tau ladder {ladder} must lie in (0, pi/4)")
        return ladder

    @field_validator("gh_grid")
    @classmethod
    def _coarse_grid(cls, grid):
        if grid < constants["GH"]["MIN_GRID"]:
            logger.warning(f"GH grid {grid} is below {constants['GH']['MIN_GRID']}, graph distances will be coarse.")
        return grid


def _write_atomic(path, text):
    """Writes text to path through a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    handle = tempfile.NamedTemporaryFile("w", encoding="utf-8", dir=directory, delete=False, suffix=".tmp")
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except Exception:
        os.unlink(handle.name)
        raise
    logger.info(f"Wrote {path}.")
    return path


def _write_csv(frame, path):
    return _write_atomic(path, frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\r\n"))


def _write_report(report, path):
    return _write_atomic(path, report.model_dump_json(indent=2) + "\n")


def _check(name, value, tolerance, passed=None):
    if passed is None:
        passed = bool(value <= tolerance)
    return CheckResult(name=name, value=float(value), tolerance=float(tolerance), passed=passed)


def _football_profile():
    return ProfileFunction(
        domain=(0.0, HALF_PI),
        func=lambda r: 0.5 * np.sin(2.0 * r),
        derivatives=(lambda r: np.cos(2.0 * r), lambda r: -2.0 * np.sin(2.0 * r)),
        name="football",
    )


def _suite_oracle(client, config):
    theta = np.linspace(0.0, HALF_PI, constants["QUOTIENT"]["THETA_GRID"])
    closed = float(np.max(np.abs(client.quotient_curvature(1, 1, theta) - 4.0)))
    chart = warped_chart(WeightedQuotientProfile.build(1, 1).R, name="hopf")
    oracle = max(
        abs(client._curvature_ops.coordinate_sectional_curvatures(chart, np.array([t, 1.0]))[(0, 1)] - 4.0)
        for t in np.linspace(0.1, HALF_PI - 0.1, 16)
    )
    ball = client.ball_suspension_metric(WeightedQuotientProfile.build(2, 3), 1.0)
    symmetry = max(
        client._curvature_ops.symmetry_violation(client.riemann(ball, np.array([r, angle, np.pi])))
        for r in (0.3, 0.6, 0.9)
        for angle in (0.3, 0.8, 1.2)
    )
    return [
        _check("hopf_closed_form", closed, 1e-10),
        _check("hopf_oracle", oracle, 1e-4),
        _check("ball_symmetry_sampled", symmetry, constants["ORACLE"]["TOL_SYM_SAMPLED"]),
        _check("round_s2_self_test", abs(client._curvature_ops.self_test() - 1.0), constants["ORACLE"]["SELF_TEST_TOL"]),
    ]


def _suite_quotient(client, config):
    checks = []
    endpoint_tol = constants["QUOTIENT"]["ENDPOINT_TOL"]
    even_tol = constants["ETA"]["EVEN_DERIVATIVE_TOL"]
    for m_minus, m_plus in ((1, 2), (2, 3), (3, 4), (2, 5)):
        report = client.endpoint_report(m_minus, m_plus)
        label = f"{m_minus}_{m_plus}"
        checks.append(_check(f"tips_vanish_{label}", max(abs(report["R_0"]), abs(report["R_half_pi"])), 0.0))
        checks.append(_check(f"slope_0_{label}", abs(report["slope_0"] - 1.0 / m_minus), endpoint_tol))
        checks.append(_check(f"slope_half_pi_{label}", abs(report["slope_half_pi"] + 1.0 / m_plus), endpoint_tol))
        checks.append(
            _check(f"even_derivatives_{label}", max(abs(report["second_0"]), abs(report["fourth_0"])), even_tol)
        )
    return checks


def _suite_eta(client, config):
    checks = []
    for tau in (0.1, 0.2, 0.3):
        for delta in (1e-1, 1e-2, 1e-3):
            eta = client.build_eta(client.smoothing_params(tau, delta, 2, constants["WEIGHT_MODE"]["QUOTIENT"]))
            margin = min(m.margin for m in client.eta_certificate(eta).margins)
            checks.append(_check(f"eta_{tau}_{delta}", margin, 0.0, passed=margin > 0.0))
    return checks


def _suite_embedding(client, config):
    metric = client.revolution_metric(_football_profile())
    curve = client.solve_embedding_ode(metric)
    return [
        _check("pullback_football", client.pullback_check(metric, curve), constants["EMBEDDING"]["TOL_ODE"]),
        _check("energy_football", metric.energy_excess(), constants["EMBEDDING"]["PROFILE_BOUND_TOL"]),
    ]


def _suite_gluing(client, config):
    checks = []
    for eps in (0.2, 0.1, 0.05, 0.01):
        margin = min(client.build_cutoff(eps).margins.values())
        checks.append(_check(f"cutoff_{eps}", margin, 0.0, passed=margin > 0.0))
    points = [[r, 1.0] for r in np.linspace(0.02, 1.0, 25)]
    for eps in constants["GLUING"]["CAP_EPS_LADDER"]:
        chart, _ = client.constant_curvature_cap(sine_profile(), None, 1.1, eps, 0.5)
        checks.append(_check(f"cap_{eps}", 1.0 - client._gluing_ops.min_curvature(chart, points), eps))
    bumpy = ChartMetric(
        coords=("r", "theta"),
        bounds=((0.0, 1.0), (0.0, 2.0 * np.pi)),
        g=lambda p: np.diag([1.0 + 0.1 * np.cos(p[1]), p[0] ** 2 * (1.0 + 0.1 * np.sin(2.0 * p[1]))]),
        periodic=(False, True),
        name="bumpy",
    )
    once = client.average_circle_action(bumpy, nodes=64)
    twice = client.average_circle_action(once, nodes=64)
    defect = max(float(np.max(np.abs(twice.metric(p) - once.metric(p)))) for p in ([0.2, 0.4], [0.7, 5.0]))
    checks.append(_check("average_idempotent", defect, constants["GLUING"]["IDEMPOTENCE_TOL"]))
    return checks


def _suite_gh(client, config):
    space = client.surface_distances(WeightedQuotientProfile.build(1, 1).R, n=config.gh_grid)
    return [
        _check("hopf_tip_distance", abs(space.dist[0, 1] - HALF_PI), 2e-2),
        _check("hopf_triangle", space.triangle_violation(seed=config.seed), constants["GH"]["TRIANGLE_TOL"]),
    ]


def _suite_tube(client, config):
    rho, length = 0.5, 1.2
    tube_ops = client._tube_ops
    eta = client.build_eta(client.smoothing_params(0.3, 1e-3, 2, constants["WEIGHT_MODE"]["QUOTIENT"]))
    tube = client.spherical_tube(2, length=length, radius=1.0, rho=rho)
    hbar = client.hbar_extension(eta, rho)
    killing = client.killing_extension(eta, rho)
    phi = lambda s, t: np.sin(t) / 2.0 * np.ones_like(np.asarray(s, dtype=float))
    glued = client.psi_min_glue(
        phi,
        tube_ops.section_field(killing),
        hbar,
        tube_ops.section_field(killing, mirror_length=length),
        rho,
        length,
    )
    t = np.full(5, 0.5 * math.atan(math.tan(eta.tau_of_delta) * math.sin(0.1)))
    s = np.array([0.1, 0.25, 0.6, 0.95, 1.1])
    zeta = tube_ops.zeta_regularity(tube, hbar, eta)
    block = tube_ops.block_structure_check(tube, hbar, (0.6, 0.05))
    monotonicity = client.monotonicity_check(rho, rho)
    derivatives = tube_ops.killing_derivative_check(eta, rho)
    tau0 = client.tau0_check(tube, 0.2)
    kink = client.greene_wu_smooth(
        lambda x: 1.0 - np.abs(x), np.abs, np.linspace(-0.5, 0.5, 41)[:, None], 0.2, geometry="flat", require_strict=False
    )
    return [
        _check("monotonicity", 0.0 if monotonicity["passed"] else 1.0, 0.0),
        _check("killing_derivatives", 0.0 if derivatives["passed"] else 1.0, 0.0),
        _check("block_structure", block["mixed_relative"], 1e-6),
        _check("zeta_finite", 0.0 if zeta["finite"] else 1.0, 0.0),
        _check("zeta_odd_residual", zeta["odd_residual"], 1e-8),
        _check("tau0", 0.0 if tau0["passed"] else 1.0, 0.0),
        _check("psi_seams", float(np.max(np.abs(glued(s, t) - np.sin(t)))), 1e-14),
        _check("greene_wu_outside", kink.deviation_outside, 0.0),
    ]


def _suite_resolver(client, config):
    floor = constants["ETA"]["WITNESS_CURVATURE_FLOOR"]
    mode = config.weight_mode
    quotient = client.weighted_quotient(config.m_minus, config.m_plus)
    witness, eta = client.find_witness(quotient, config.tau, config.delta_ladder, mode=mode)
    margin = min(m.margin for m in client.eta_certificate(eta).margins)
    tip = client._resolution_ops.tip_report(client.resolved_profile(quotient, eta, mode))
    suspension, _ = client.resolved_suspension_sweep(quotient, eta, 1.0, n=3, mode=mode)
    smooth, _ = client.find_witness(
        client.weighted_quotient(1, 1), config.tau, config.delta_ladder, mode=constants["WEIGHT_MODE"]["QUOTIENT"]
    )
    label = f"{config.m_minus}_{config.m_plus}"
    return [
        _check(f"witness_{label}", witness.min_curvature, floor, passed=witness.min_curvature >= floor),
        _check(f"certificate_{label}", margin, 0.0, passed=margin > 0.0),
        _check(f"tip_slope_{label}", abs(tip["slope"] - 1.0), constants["ETA"]["SLOPE_TOL"]),
        _check(
            f"tip_even_{label}",
            max(abs(tip["second_symmetric"]), abs(tip["fourth_symmetric"])),
            constants["ETA"]["EVEN_DERIVATIVE_TOL"],
        ),
        _check(f"suspension_{label}", 1.0 - suspension, 1e-3),
        _check("smooth_tip_1_1", abs(smooth.min_curvature - 4.0), 1e-6),
    ]


SUITES = {
    "oracle": _suite_oracle,
    "quotient": _suite_quotient,
    "eta": _suite_eta,
    "embedding": _suite_embedding,
    "gluing": _suite_gluing,
    "gh": _suite_gh,
    "tube": _suite_tube,
    "resolver": _suite_resolver,
}


def cmd_profile(client, config):
    """CSV of (theta, R, R', R'', sec) and a JSON summary."""
    table = client.profile_table(config.m_minus, config.m_plus, n=config.grid)
    endpoints = client.endpoint_report(config.m_minus, config.m_plus)
    summary = ProfileSummary(
        m_minus=config.m_minus,
        m_plus=config.m_plus,
        min_curvature_gap=client.curvature_gap(config.m_minus, config.m_plus),
        argmin=float(table["theta"][table["sec"].idxmin()]),
        slope_at_zero=endpoints["slope_0"],
        slope_at_half_pi=endpoints["slope_half_pi"],
        rows=len(table),
    )
    stem = os.path.join(config.out_dir, f"profile_{config.m_minus}_{config.m_plus}")
    _write_csv(table, stem + ".csv")
    return RunReport(command="profile", seed=config.seed, config=config.model_dump(), profile=summary)


def cmd_resolve(client, config):
    """First delta witness of the ladder, its eta certificate and the resolved curvature sweep."""
    quotient = client.weighted_quotient(config.m_minus, config.m_plus)
    stem = os.path.join(config.out_dir, f"resolve_{config.m_minus}_{config.m_plus}_{config.tau}")
    try:
        witness, eta = client.find_witness(quotient, config.tau, config.delta_ladder, mode=config.weight_mode)
    except WitnessNotFoundError as e:
        failed = RunReport(
            command="resolve",
            seed=config.seed,
            config=config.model_dump(),
            checks=[_check(f"witness_{delta}", -margin, 0.0) for delta, margin in e.margins.items()],
        )
        _write_report(failed, stem + ".json")
        raise
    table = client.eta_table(eta)
    resolved = client.resolved_profile(quotient, eta, config.weight_mode)
    theta = table["theta"].to_numpy()
    table["R"] = np.asarray(quotient.tip_profile(config.weight_mode).value(theta))
    interior = (theta > 0.0) & (theta < HALF_PI)
    sec = np.full(theta.shape, np.nan)
    sec[interior] = -np.asarray(resolved.derivative(theta[interior], 2)) / np.asarray(resolved.value(theta[interior]))
    table["sec"] = sec
    _write_csv(table, stem + ".csv")
    return RunReport(
        command="resolve",
        seed=config.seed,
        config=config.model_dump(),
        certificate=client.eta_certificate(eta),
        witness=witness,
        checks=[_check("tip_slope", abs(witness.tip_slope - 1.0), constants["ETA"]["SLOPE_TOL"])],
    )


def cmd_verify(client, config):
    """Runs one invariant suite, or lists the suites when none is named."""
    if not config.suite:
        print("\n".join(sorted(SUITES)))
        return None
    if config.suite not in SUITES:
        raise InputValidationError(f"Unknown suite: {config.suite}. Valid options are {', '.join(sorted(SUITES))}.")
    report = RunReport(
        command="verify", seed=config.seed, config=config.model_dump(), checks=SUITES[config.suite](client, config)
    )
    _write_report(report, os.path.join(config.out_dir, f"verify_{config.suite}.json"))
    if not report.passed:
        failed = [check.name for check in report.checks if not check.passed]
        raise OracleDisagreementError(f"Suite {config.suite} failed checks {failed}.")
    return report


def cmd_gh(client, config):
    """GH convergence study along the tau ladder, with the identical input control."""
    study = client.convergence_study(
        config.m_minus, config.m_plus, config.tau_ladder, config.delta_ladder, n=config.gh_grid, mode=config.weight_mode
    )
    base = client.surface_distances(
        client.weighted_quotient(config.m_minus, config.m_plus).tip_profile(config.weight_mode), n=config.gh_grid
    )
    control = client.gh_upper_bound(base, base)
    checks = [
        _check("identical_inputs", control, 0.0),
        _check("monotone", 0.0 if study.monotone else 1.0, 0.0),
    ]
    if len(study.levels) > 1:
        checks.append(_check("halving_ratio", study.halving_ratio, 0.5))
    stem = os.path.join(config.out_dir, f"gh_{config.m_minus}_{config.m_plus}")
    _write_csv(pd.DataFrame([level.model_dump() for level in study.levels]), stem + ".csv")
    return RunReport(
        command="gh",
        seed=config.seed,
        config=config.model_dump(),
        gh=study,
        checks=checks,
    )


def cmd_schema(client, config):
    """Prints the JSON schema of the reports."""
    print(json.dumps(report_schema(), indent=2))
    return None


COMMANDS = {
    "profile": cmd_profile,
    "resolve": cmd_resolve,
    "verify": cmd_verify,
    "gh": cmd_gh,
    "schema": cmd_schema,
}


def _get_input_arguments(argv=None):
    """Parse command line arguments.

    Returns:
        argparse.Namespace: The parsed command line arguments
    """
    parser = argparse.ArgumentParser(description="Build and verify resolutions of weighted circle quotients.")
    parser.add_argument("command", choices=sorted(COMMANDS), help="The command to run")
    parser.add_argument("suite", nargs="?", default=None, help="Suite name for verify")
    parser.add_argument("--config", dest="config", type=str, default=None,
                        help="Flat key = value file with default parameters")
    parser.add_argument("--m-minus", dest="m_minus", type=int, default=None, help="Isotropy order at theta = 0")
    parser.add_argument("--m-plus", dest="m_plus", type=int, default=None, help="Isotropy order at theta = pi/2")
    parser.add_argument("--grid", dest="grid", type=int, default=None, help="Rows of the profile table")
    parser.add_argument("--tau", dest="tau", type=float, default=None, help="Support radius of eta")
    parser.add_argument("--delta-ladder", dest="delta_ladder", type=float, nargs="+", default=None,
                        help="Descending deltas tried for the witness")
    parser.add_argument("--weight-mode", dest="weight_mode", type=str, default=None,
                        help="quotient or branched")
    parser.add_argument("--tau-ladder", dest="tau_ladder", type=float, nargs="+", default=None,
                        help="Descending taus of the GH study")
    parser.add_argument("--gh-grid", dest="gh_grid", type=int, default=None, help="Rows and columns of the GH grid")
    parser.add_argument("--out-dir", dest="out_dir", type=str, default=None, help="Directory of the outputs")
    parser.add_argument("--seed", dest="seed", type=int, default=None, help="Seed of randomized checks")
    parser.add_argument("--debug", dest="debug", action="store_true", help="Log at DEBUG level")
    return parser.parse_args(argv)


def build_config(args):
    """RunConfig from the optional config file overlaid by the given flags."""
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            values.update(toml.load(handle))
    flags = {
        key: value
        for key, value in vars(args).items()
        if value is not None and key not in ("config", "debug")
    }
    values.update(flags)
    return RunConfig(**values)


def main(argv=None):
    """Main entry point for the CLI."""
    args = _get_input_arguments(argv)
    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)
        logger.setLevel(logging.DEBUG)
    try:
        config = build_config(args)
        client = Client(ClientOptions(weight_mode=config.weight_mode, seed=config.seed))
        report = COMMANDS[config.command](client, config)
        if report is not None:
            _write_report(report, os.path.join(config.out_dir, f"{config.command}_report.json"))
            print(report.model_dump_json(indent=2))
        return EXIT_CODES["SUCCESS"]
    except (ValidationError, InputValidationError, toml.TomlDecodeError) as e:
        logger.error(f"Invalid input: {e}")
        print(f"Invalid input: {e}", file=sys.stderr)
        return EXIT_CODES["VALIDATION"]
    except WitnessNotFoundError as e:
        logger.error(f"No witness: {e} Margins: {e.margins}")
        print(f"No witness: {e} Margins: {e.margins}", file=sys.stderr)
        return EXIT_CODES["WITNESS_NOT_FOUND"]
    except OracleDisagreementError as e:
        logger.error(f"Oracle disagreement: {e}")
        print(f"Oracle disagreement: {e}", file=sys.stderr)
        return EXIT_CODES["ORACLE_DISAGREEMENT"]


if __name__ == "__main__":
    sys.exit(main())
