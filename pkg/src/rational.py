"""Canonical rational numbers shared by manifests, matrices and reports."""
import math
import re
from fractions import Fraction
from typing import Annotated, Union

from pydantic import BeforeValidator, PlainSerializer
from pydantic_core import PydanticCustomError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value: object) -> Fraction:
    """
    Parse an exact rational from an int, a Fraction or a "p/q" string

    Floats and booleans are rejected: charges must be given exactly.

    :param value: raw manifest value
    :return: the canonical Fraction
    """
    if isinstance(value, bool):
        raise PydanticCustomError("bad_rational", "booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if match is None:
            raise PydanticCustomError(
                "bad_rational", "'{value}' is not of the form p/q", {"value": value}
            )
        numerator, denominator = match.groups()
        if denominator is not None and int(denominator) == 0:
            raise PydanticCustomError(
                "bad_rational", "'{value}' has a zero denominator", {"value": value}
            )
        return Fraction(int(numerator), int(denominator or 1))
    raise PydanticCustomError(
        "bad_rational",
        "expected an integer or a 'p/q' string, got {kind}",
        {"kind": type(value).__name__},
    )


def format_rational(value: Fraction) -> Union[int, str]:
    """Bare integer when integral, canonical "p/q" string otherwise"""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def lcm_of_denominators(values) -> int:
    result = 1
    for value in values:
        result = math.lcm(result, Fraction(value).denominator)
    return result


def sign(value) -> int:
    return (value > 0) - (value < 0)


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=Union[int, str], when_used="json"),
]
