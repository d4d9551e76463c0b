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
"""Orbifold resolution toolkit exceptions
   2024 Google
"""


class ResolutionToolkitError(Exception):
    """Base class of every error raised by the toolkit."""


class InputValidationError(ResolutionToolkitError, ValueError):
    """Input is outside the documented range of an operation."""


class InfeasibleParametersError(InputValidationError):
    """Smoothing parameters cannot be realized by the implemented family."""


class ChartBoundaryError(InputValidationError):
    """Point is closer to the chart boundary than the stencil allows."""


class SeamMismatchError(InputValidationError):
    """Pieces of a glued profile disagree on a seam."""


class FirstOrderMismatchError(InputValidationError):
    """Metrics to blend do not agree to first order along the gluing set."""


class NotConcaveError(InputValidationError):
    """Profile handed to the concave smoother is not concave."""


class RigidityCaseError(InputValidationError):
    """Profile sphere reaches sup R >= 1, the rigid case with tip distance pi.

    By Cheng's maximal diameter theorem such a sphere is a round suspension;
    it is not constructed here.
    """


class WitnessNotFoundError(ResolutionToolkitError, RuntimeError):
    """No parameter in a ladder reproduced the claimed bound."""

    def __init__(self, message, margins=None):
        super().__init__(message)
        self.margins = margins or {}


class OracleDisagreementError(ResolutionToolkitError, RuntimeError):
    """Finite difference oracle and closed form disagree beyond tolerance."""
