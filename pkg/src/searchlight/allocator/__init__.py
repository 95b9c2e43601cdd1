"""Uniformly optimal search plans by water-filling.

Notes:
    The optimal allocation of a budget K sets the prior-weighted marginal detection
    rate q_x(y) = π(x)·∂d/∂y(x, y) equal to a common multiplier λ* on every funded
    cell and leaves cells with q_x(0) ≤ λ* unfunded. λ* solves Q(λ) = K, where Q
    sums the inverses q_x⁻¹ over the space.

Examples: Typical Usage
    >>> from searchlight import allocator, domain
    >>> prior = domain.DiscretePmf(weights=(0.5, 0.5))
    >>> solution = allocator.solve_lambda(prior, domain.ExponentialRate(1.0), 2.0)
    >>> solution.allocation.effort.round(12).tolist()
    [1.0, 1.0]

See Also:
    * [`solve_lambda`][searchlight.allocator.api.solve_lambda]
    * [`water_filling`][searchlight.allocator.routines.water_filling]
"""

from searchlight.allocator.api import *
from searchlight.allocator.routines import *
