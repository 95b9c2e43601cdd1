"""Independent checks on the allocator and evaluator.

* [`brute_force_allocation`][searchlight.oracle.brute.brute_force_allocation] searches
  small discrete instances exhaustively.
* [`monte_carlo_detection`][searchlight.oracle.montecarlo.monte_carlo_detection]
  simulates searches with a pinned, counter-based generator.
* [`closed_form_reference`][searchlight.oracle.references.closed_form_reference]
  evaluates the known formulas for the bundled scenarios.
"""

from searchlight.oracle.brute import *
from searchlight.oracle.montecarlo import *
from searchlight.oracle.references import *
