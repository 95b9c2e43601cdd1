"""Core value types shared by every other part of the library.

Notes:
    All domain values are immutable after construction and safe to share across
    threads. Continuous areas are discretized on uniform grids and evaluated with
    midpoint quadrature; effort over a grid is stored as a density.

Examples: Typical Usage
    >>> from searchlight import domain
    >>> prior = domain.DiscretePmf(weights=(0.5, 0.5))
    >>> report = domain.validate(
    ...     prior.space, prior, domain.ExponentialRate(1.0), domain.Linear(1.0)
    ... )
    >>> report.passed
    True

See Also:
    * [`validate`][searchlight.domain.validation.validate]
    * [`Allocation`][searchlight.domain.plans.Allocation]
"""

from searchlight.domain.detection import *
from searchlight.domain.plans import *
from searchlight.domain.priors import *
from searchlight.domain.schedules import *
from searchlight.domain.spaces import *
from searchlight.domain.validation import *
