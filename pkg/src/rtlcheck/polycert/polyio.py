"""
JSON encoding of constraints, polyhedra and certificates.

    polyhedron  = [{"coeffs": {"x1": "1/2", ...}, "bound": "3/2"}, ...]
    certificate = {"lambdas": {"0": "1/2", "1": "1/2"}}

Rationals are "p/q" strings; plain JSON integers are accepted on input.
"""

import re
from fractions import Fraction
from typing import Any

from rtlcheck.errors import InvariantFormatError, UsageError
from rtlcheck.polycert.constraints import Constraint, FarkasCert, Polyhedron

_VAR_RE = re.compile(r"x(\d+)")


def rational_to_json(q: Fraction) -> str:
    return str(q)


def rational_from_json(raw: Any) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise InvariantFormatError(f"a rational is a 'p/q' string or an integer, got {raw!r}")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as e:
        raise InvariantFormatError(f"invalid rational {raw!r}") from e


def parse_variable(name: Any) -> int:
    match = _VAR_RE.fullmatch(name) if isinstance(name, str) else None
    if match is None or int(match.group(1)) < 1:
        raise InvariantFormatError(f"invalid variable {name!r}")
    return int(match.group(1))


def constraint_to_json(c: Constraint) -> dict[str, Any]:
    return {
        "coeffs": {f"x{v}": rational_to_json(q) for v, q in c.coeffs},
        "bound": rational_to_json(c.bound),
    }


def constraint_from_json(raw: Any) -> Constraint:
    if not isinstance(raw, dict) or "coeffs" not in raw or "bound" not in raw:
        raise InvariantFormatError(f"a constraint has 'coeffs' and 'bound', got {raw!r}")
    if not isinstance(raw["coeffs"], dict):
        raise InvariantFormatError("'coeffs' is an object from variables to rationals")
    return Constraint.of(
        {parse_variable(v): rational_from_json(q) for v, q in raw["coeffs"].items()},
        rational_from_json(raw["bound"]),
    )


def polyhedron_to_json(p: Polyhedron) -> list[dict[str, Any]]:
    return [constraint_to_json(c) for c in p]


def polyhedron_from_json(raw: Any) -> Polyhedron:
    if not isinstance(raw, list):
        raise InvariantFormatError("a polyhedron is a list of constraints")
    return Polyhedron.of(constraint_from_json(c) for c in raw)


def cert_to_json(cert: FarkasCert) -> dict[str, Any]:
    return {"lambdas": {str(i): rational_to_json(q) for i, q in cert.lambdas}}


def cert_from_json(raw: Any) -> FarkasCert:
    if not isinstance(raw, dict) or not isinstance(raw.get("lambdas"), dict):
        raise InvariantFormatError(f"a certificate is {{'lambdas': {{...}}}}, got {raw!r}")
    lambdas = {}
    for i, q in raw["lambdas"].items():
        try:
            index = int(i)
        except ValueError:
            raise InvariantFormatError(f"invalid constraint index {i!r}") from None
        lambdas[index] = rational_from_json(q)
    try:
        return FarkasCert.of(lambdas)
    except UsageError as e:
        raise InvariantFormatError(str(e)) from e


def certs_from_json(raw: Any) -> list[FarkasCert]:
    """A single certificate object or a list of them"""
    if isinstance(raw, list):
        return [cert_from_json(c) for c in raw]
    return [cert_from_json(raw)]
