from dataclasses import dataclass
from fractions import Fraction
from math import gcd


def candidate_ratios(lower=Fraction(8, 5), upper=Fraction(5, 3), max_x=34):
    """ All reduced pairs (x, y) with lower < x/y < upper and x <= max_x, ascending in x (ties by y).

    A competitive ratio c is proven by showing that OPT needs y clusters whenever ON creates x, so these
    pairs are the ratios an algorithm between the two bounds could aim for.
    """
    lower, upper = Fraction(lower), Fraction(upper)
    if lower >= upper:
        raise ValueError(f"lower bound {lower} must be below upper bound {upper}")
    pairs = []
    for x in range(1, max_x + 1):
        for y in range(1, x + 1):
            if gcd(x, y) == 1 and lower < Fraction(x, y) < upper:
                pairs.append((x, y))
    return pairs


@dataclass(frozen=True)
class KnownBound:
    kind: str  # "upper" or "lower"
    ratio: Fraction
    year: int
    note: str


def known_bounds():
    """ Published bounds on the deterministic competitive ratio in one dimension, oldest first per kind. """
    return [
        KnownBound("upper", Fraction(2), 2007, "grid algorithm"),
        KnownBound("upper", Fraction(7, 4), 2008, "first improvement on the grid algorithm"),
        KnownBound("upper", Fraction(5, 3), 2010, "current best upper bound"),
        KnownBound("lower", Fraction(3, 2), 2007, "two-point fork"),
        KnownBound("lower", Fraction(8, 5), 2008, "previous best lower bound"),
        KnownBound("lower", Fraction(13, 8), 2015, "builtin:kk13"),
    ]


def best_known_lower_bound_met(value):
    """ Largest published lower bound that `value` reaches, or None. """
    met = [b for b in known_bounds() if b.kind == "lower" and value >= b.ratio]
    return max(met, key=lambda b: b.ratio) if met else None


def nearest_candidate_below(value, max_x=34):
    """ The largest candidate pair whose ratio is at most `value`, or None. """
    pairs = [(x, y) for x, y in candidate_ratios(max_x=max_x) if Fraction(x, y) <= value]
    return max(pairs, key=lambda pair: (Fraction(*pair), -pair[0])) if pairs else None
