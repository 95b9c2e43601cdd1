"""Uniformly optimal search plans for a stationary target.

Examples: Typical Usage
    >>> import searchlight
    >>>
    >>> prior = searchlight.DiscretePmf(weights=(2 / 3, 1 / 3))
    >>> det = searchlight.ExponentialRate(1.0)
    >>> alloc = searchlight.optimal_allocation(prior, det, 1.3862943611198906)
    >>> [round(v, 6) for v in alloc.effort]
    [1.039721, 0.346574]
    >>> truth = searchlight.GroundTruth(1)
    >>> round(searchlight.true_detection_prob(truth, det, alloc), 6)
    0.646447
"""

from __future__ import annotations

import importlib.metadata

from searchlight.api import *

__metadata__ = importlib.metadata.metadata("searchlight")
__version__ = __metadata__.get("version")
__authors__ = __metadata__.get("authors")
__license__ = __metadata__.get("license")
