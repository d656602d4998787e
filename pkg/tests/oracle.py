"""Independent re-evaluation of the congruence formula in exact arithmetic."""

import random
from fractions import Fraction


def congruence_exact(alpha, o_e, couplings, o_s, o_d, shuffle_seed=None):
    """Evaluate o_e * (alpha + sum Fa_j * o_s_j) + o_d with Fractions.

    The sum runs in a shuffled order so agreement does not depend on the
    summation order used by the engine.
    """
    terms = [(Fraction(couplings[k]), Fraction(v)) for k, v in o_s.items() if k in couplings]
    random.Random(shuffle_seed).shuffle(terms)
    total = Fraction(0)
    for fa, s in terms:
        total += fa * s
    return Fraction(o_e) * (Fraction(alpha) + total) + Fraction(o_d)
