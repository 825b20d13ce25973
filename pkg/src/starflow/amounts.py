"""Exact decimal amounts.

Every capacity and utility is held as an ``int`` or a :class:`fractions.Fraction`;
nothing on the solve path touches binary floating point.
"""

from __future__ import annotations

import re
from decimal import ROUND_DOWN, Decimal
from fractions import Fraction
from typing import Union

from .errors import PrecisionExceeded

Amount = Union[int, Fraction]

DEFAULT_PRECISION = 6

_DECIMAL_RE = re.compile(r"^[+-]?(\d+)(?:\.(\d+))?$")


def parse_amount(text: str, precision: int = DEFAULT_PRECISION) -> Amount:
    """Parse a plain decimal string such as ``"2"`` or ``"0.125"``.

    Raises ValueError for anything that is not a plain decimal and
    PrecisionExceeded for more than `precision` fractional digits.
    """
    m = _DECIMAL_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a decimal number: {text!r}")
    frac = m.group(2) or ""
    if len(frac.rstrip("0")) > precision:
        raise PrecisionExceeded(f"{text!r} has more than {precision} fractional digits")
    return normalize(Fraction(text.strip()))


def normalize(x: Amount) -> Amount:
    """Collapse integral fractions to ``int`` so equality and printing stay simple."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def fractional_digits(x: Amount) -> int | None:
    """Number of decimal places needed to write `x` exactly, None if non-terminating."""
    q = Fraction(x)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return None
    return max(twos, fives)


def check_precision(x: Amount, precision: int) -> None:
    digits = fractional_digits(x)
    if digits is None or digits > precision:
        raise PrecisionExceeded(f"{format_amount(x)} is not representable with {precision} fractional digits")


def format_amount(x: Amount) -> str:
    """Exact decimal rendering; falls back to ``p/q`` for non-terminating values."""
    q = Fraction(x)
    if q.denominator == 1:
        return str(q.numerator)
    digits = fractional_digits(q)
    if digits is None:
        return f"{q.numerator}/{q.denominator}"
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = q.numerator * (10**digits) // q.denominator
    whole, part = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{part:0{digits}d}"


def from_float(value: float, decimals: int, *, round_down: bool = False) -> Amount:
    """Quantize a generated float to `decimals` places and return it exactly."""
    d = Decimal(repr(value))
    q = Decimal(1).scaleb(-decimals)
    d = d.quantize(q, rounding=ROUND_DOWN) if round_down else d.quantize(q)
    return normalize(Fraction(d))


def to_float(x: Amount) -> float:
    return float(x)
