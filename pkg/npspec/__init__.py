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

"""Neumann-Poincare spectra of spheroids and thin flat domains."""

import logging

__version__ = '0.2.0'

npspec_logger = logging.getLogger("npspec")
npspec_logger.addHandler(logging.NullHandler())

from npspec.errors import (  # noqa: E402
    NPSpecError, DomainError, SingularKernelError, LegendreOverflowError, RangeError,
    ResolutionError, AliasingError, BudgetError, PoleError, EigenSolverError,
    SpectralBoundError, CacheError, NearSingularWarning)

__all__ = [
    '__version__', 'npspec_logger',
    'NPSpecError', 'DomainError', 'SingularKernelError', 'LegendreOverflowError', 'RangeError',
    'ResolutionError', 'AliasingError', 'BudgetError', 'PoleError', 'EigenSolverError',
    'SpectralBoundError', 'CacheError', 'NearSingularWarning',
]
