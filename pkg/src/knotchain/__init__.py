"""knotchain: chain-level knot concordance machinery.

From a planar diagram code this package builds, in exact arithmetic, the
Wirtinger presentation and its identities, the handle chain complexes of
the knot exterior at augmentation / abelian / metabelian coefficients,
Trotter's diagonal approximation and the symmetric Poincare triad, the
algebraic zero surgery, and the first- and second-order concordance
obstructions (Alexander polynomial, Fox-Milnor, Levine-Tristram
signatures, Blanchfield pairings by two routes, metaboliser search).
"""

__version__ = "0.1.0"

from .diagram import Diagram, parse_diagram
from .invariants import (alexander_polynomial, blanchfield_chain_level,
                         blanchfield_from_seifert, fox_milnor_test,
                         levine_tristram, seifert_metabolic_screen)
from .triads import (connected_sum, fundamental_triad, negate_triad,
                     unknot_triad, verify_triad, zero_surgery_complex)

__all__ = [
    "Diagram", "parse_diagram", "alexander_polynomial",
    "blanchfield_chain_level", "blanchfield_from_seifert", "fox_milnor_test",
    "levine_tristram", "seifert_metabolic_screen", "connected_sum",
    "fundamental_triad", "negate_triad", "unknot_triad", "verify_triad",
    "zero_surgery_complex", "__version__",
]
