# Copyright 2026 The npspec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exception and warning types raised by npspec."""


class NPSpecError(Exception):
    """Base class of every error raised by npspec."""


class DomainError(NPSpecError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularKernelError(NPSpecError, ValueError):
    """A kernel was evaluated on its singular set (diagonal, rim, t = 0)."""


class LegendreOverflowError(NPSpecError, OverflowError):
    """A Legendre function value is not representable as a double.

    The eigenvalue formula only needs the product P_n^m Q_n^m, which stays
    finite; use ``legendre_pq_product_derivative`` or ``prolate.eigenvalue``.
    """


class RangeError(NPSpecError, ValueError):
    """A tuning target lies outside the attainable interval of a mode."""


class ResolutionError(NPSpecError):
    """The grid is too coarse for the requested geometry or oscillation."""


class AliasingError(NPSpecError):
    """A sampled density does not decay before the edge of its FFT grid."""


class BudgetError(NPSpecError):
    """A direct quadrature would exceed the configured pair budget."""


class PoleError(NPSpecError, ZeroDivisionError):
    """The plasmon relation has no finite value at the requested point."""


class EigenSolverError(NPSpecError):
    """The dense eigensolver did not converge."""


class SpectralBoundError(NPSpecError):
    """Computed eigenvalues left the interval (-0.51, 0.51)."""


class CacheError(NPSpecError):
    """A spectrum cache record could not be read."""


class NearSingularWarning(RuntimeWarning):
    """Evaluation close to a singular point; accuracy is reduced."""
