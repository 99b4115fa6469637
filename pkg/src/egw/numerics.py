"""Exact integer evaluation of the e-dependent bound expressions.

The bound tables need values like floor(2**k / (e*k)).  Floats lose the
race long before k = 64, so we bracket e between two rationals that agree
to 40 decimal digits and insist that both brackets give the same floor.
If they ever disagreed the bracket would be too loose for that input, and
we raise instead of guessing.
"""

from __future__ import annotations

from fractions import Fraction

# 2.7182818284590452353602874713526624977572(47...) -- truncation is a
# strict lower bound, so adding one ulp gives a strict upper bound.
_E_DIGITS = 27182818284590452353602874713526624977572
_E_SCALE = 10 ** 40
E_LOW = Fraction(_E_DIGITS, _E_SCALE)
E_HIGH = Fraction(_E_DIGITS + 1, _E_SCALE)


def floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def floor_div_e(numerator: int, multiplier: int = 1) -> int:
    """floor(numerator / (e * multiplier)), exactly.

    Uses both rational brackets of e; raises if they straddle an integer.
    """
    if multiplier <= 0:
        raise ValueError("multiplier must be positive")
    lo = floor_fraction(Fraction(numerator) / (E_HIGH * multiplier))
    hi = floor_fraction(Fraction(numerator) / (E_LOW * multiplier))
    if lo != hi:
        raise ArithmeticError(
            f"e bracket too coarse for floor({numerator}/(e*{multiplier}))"
        )
    return lo


def compare_with_e_threshold(value: Fraction, numerator: Fraction) -> bool:
    """Decide value <= numerator / e exactly, or raise if the bracket is too tight.

    Returns True iff value <= numerator/e.
    """
    # value <= num/e  <=>  value * e <= num
    if value * E_HIGH <= numerator:
        return True
    if value * E_LOW > numerator:
        return False
    raise ArithmeticError("e bracket too coarse to decide comparison")
