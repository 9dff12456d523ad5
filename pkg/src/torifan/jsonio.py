"""Serialization: exact rationals as "p/q" strings, fans and divisors as JSON.

Decimal renderings are display-only companions to the exact fields and never
feed back into any computation.
"""

from __future__ import annotations

import decimal
import json
from fractions import Fraction

from torifan.errors import ParseError
from torifan.toric import TDivisor, ToricVariety, validate_fan

DECIMAL_DIGITS = 12


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"expected a rational string, got {text!r}")
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {text!r}") from exc


def decimal_string(x) -> str:
    """Round to DECIMAL_DIGITS significant digits, deterministically."""
    x = Fraction(x)
    with decimal.localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        value = decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)
    return str(value)


def fan_to_dict(variety: ToricVariety) -> dict:
    return {
        "dim": variety.dim,
        "rays": [list(r) for r in variety.rays],
        "max_cones": [list(c) for c in variety.max_cones],
        "name": variety.name,
    }


def fan_from_dict(data) -> ToricVariety:
    if not isinstance(data, dict):
        raise ParseError("fan JSON must be an object")
    missing = {"dim", "rays", "max_cones"} - set(data)
    if missing:
        raise ParseError(f"fan JSON lacks keys: {sorted(missing)}")
    try:
        dim = int(data["dim"])
        rays = [tuple(int(c) for c in ray) for ray in data["rays"]]
        cones = [tuple(int(i) for i in cone) for cone in data["max_cones"]]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed fan JSON: {exc}") from exc
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ParseError("fan name must be a string")
    return validate_fan(dim, rays, cones, name)


def load_fan(path) -> ToricVariety:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return fan_from_dict(data)


def divisor_to_dict(divisor: TDivisor) -> dict:
    return {"coeffs": [format_rational(c) for c in divisor.coeffs]}


def divisor_from_dict(data, variety: ToricVariety) -> TDivisor:
    if not isinstance(data, dict) or "coeffs" not in data:
        raise ParseError('divisor JSON must be an object with a "coeffs" list')
    coeffs = [parse_rational(c) for c in data["coeffs"]]
    return TDivisor(variety, coeffs)


def load_divisor(path, variety: ToricVariety) -> TDivisor:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return divisor_from_dict(data, variety)


def dumps(payload) -> str:
    """Canonical JSON text: stable key order as built, trailing newline."""
    return json.dumps(payload, indent=2) + "\n"
