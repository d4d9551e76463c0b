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
"""Options of the resolution toolkit client
   2024 Google
"""
# Standard library imports
import json
import toml
import pkgutil

# Local imports
from .exceptions import InputValidationError

# Load constants from constants.toml located in the same package
constants = toml.loads(pkgutil.get_data(__package__, "constants.toml").decode())


class ClientOptions:
    """Represents the client options for the resolution toolkit client."""

    def __init__(
        self,
        h_fd=constants["ORACLE"]["H_FD"],
        tol_oracle=constants["ORACLE"]["TOL_ORACLE"],
        tol_sym=constants["ORACLE"]["TOL_SYM"],
        tol_match=constants["GLUING"]["TOL_MATCH"],
        seam_tol=constants["TUBE"]["SEAM_TOL"],
        theta_grid=constants["QUOTIENT"]["THETA_GRID"],
        eta_grid=constants["ETA"]["GRID"],
        ode_step=constants["EMBEDDING"]["ODE_STEP"],
        weight_mode=constants["WEIGHT_MODE"]["QUOTIENT"],
        seed=constants["CLI"]["SEED"],
        run_self_test=True,
    ):
        valid_modes = (constants["WEIGHT_MODE"]["QUOTIENT"], constants["WEIGHT_MODE"]["BRANCHED"])
        if weight_mode not in valid_modes:
            raise InputValidationError(
                f"Invalid weight mode: {weight_mode}. Valid options are {', '.join(valid_modes)}."
            )
        for name, value in (
            ("h_fd", h_fd),
            ("tol_oracle", tol_oracle),
            ("tol_sym", tol_sym),
            ("tol_match", tol_match),
            ("seam_tol", seam_tol),
            ("ode_step", ode_step),
        ):
            if not value > 0.0:
                raise InputValidationError(f"Option {name}={value} must be positive.")
        if theta_grid < 2 or eta_grid < 2:
            raise InputValidationError(f"Grids theta_grid={theta_grid} and eta_grid={eta_grid} need 2 or more points.")
        self._h_fd = h_fd
        self._tol_oracle = tol_oracle
        self._tol_sym = tol_sym
        self._tol_match = tol_match
        self._seam_tol = seam_tol
        self._theta_grid = int(theta_grid)
        self._eta_grid = int(eta_grid)
        self._ode_step = ode_step
        self._weight_mode = weight_mode
        self._seed = int(seed)
        self._run_self_test = run_self_test

    def to_dict(self):
        """Convert the ClientOptions object to a dictionary."""
        return {
            "h_fd": self._h_fd,
            "tol_oracle": self._tol_oracle,
            "tol_sym": self._tol_sym,
            "tol_match": self._tol_match,
            "seam_tol": self._seam_tol,
            "theta_grid": self._theta_grid,
            "eta_grid": self._eta_grid,
            "ode_step": self._ode_step,
            "weight_mode": self._weight_mode,
            "seed": self._seed,
            "run_self_test": self._run_self_test,
        }

    def __str__(self):
        """Return a JSON string representation of the ClientOptions object."""
        return json.dumps(self.to_dict(), indent=2)

    def __repr__(self):
        """Return a string representation of the ClientOptions object for debugging."""
        return self.__str__()
