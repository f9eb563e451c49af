from decimal import Decimal, InvalidOperation
from fractions import Fraction

from online_unit_clustering.errors import OffGridError

# coordinates in the lower bound instance are multiples of 0.1
DEFAULT_SCALE = 10


def parse_position(text, scale=DEFAULT_SCALE):
    """ Converts a decimal (or "n/d") coordinate string into a scaled integer position.

    Values that are not an exact multiple of 1/`scale` are rejected, never rounded.

    :param text: coordinate as given in a points, tree or trace file, e.g. "2.5"
    :param scale: number of scaled steps per unit length
    :return: the integer numerator of the coordinate on the 1/`scale` grid
    """
    text = str(text).strip()
    try:
        if "/" in text:
            value = Fraction(text)
        else:
            value = Fraction(Decimal(text))
    except (InvalidOperation, ValueError, ZeroDivisionError):
        raise ValueError(f"'{text}' is not a decimal coordinate")

    scaled = value * scale
    if scaled.denominator != 1:
        raise OffGridError(text, scale)
    return scaled.numerator


def format_position(value, scale=DEFAULT_SCALE):
    """ Inverse of :func:`parse_position`. Terminating values are rendered as plain decimals ("2.5", "3"),
    all others as an exact fraction ("1/3").
    """
    frac = Fraction(value, scale)
    if frac.denominator == 1:
        return str(frac.numerator)

    rest = frac.denominator
    for prime in (2, 5):
        while rest % prime == 0:
            rest //= prime
    if rest != 1:
        return f"{frac.numerator}/{frac.denominator}"

    digits = 0
    power = 1
    while power % frac.denominator:
        power *= 10
        digits += 1
    decimal = Decimal(frac.numerator * (power // frac.denominator)).scaleb(-digits)
    return format(decimal, "f")


def parse_ratio(text):
    """ Parses an exact ratio like "13/8" (or an integer / terminating decimal) into a Fraction.

    :raises ValueError: for negative values, zero denominators and anything that is not exact
    """
    text = str(text).strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            ratio = Fraction(int(num), int(den))
        else:
            ratio = Fraction(Decimal(text))
    except (InvalidOperation, ValueError, ZeroDivisionError):
        raise ValueError(f"'{text}' is not an exact ratio of the form N/D")
    if ratio < 0:
        raise ValueError(f"ratio '{text}' must not be negative")
    return ratio


def format_ratio(ratio):
    """ Renders a ratio as "N/D", always with an explicit denominator (2 -> "2/1"). """
    if ratio is None:
        return "none"
    ratio = Fraction(ratio)
    return f"{ratio.numerator}/{ratio.denominator}"
