"""Exact rational helpers: parsing and JSON encoding of :class:`Fraction`."""

from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"`` or an integer string. Floats are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if isinstance(text, dict):
        return Fraction(int(text["num"]), int(text["den"]))
    match = _RATIONAL.match(str(text))
    if not match:
        raise ValueError(f"not an exact rational: {text!r} (use NUM/DEN)")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def decimal_str(q: Fraction, digits: int = 6) -> str:
    return f"{float(q):.{digits}f}".rstrip("0").rstrip(".") or "0"


def rational_to_json(q: Fraction) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator, "decimal": decimal_str(q)}


def rational_from_json(obj) -> Fraction:
    return parse_rational(obj)
