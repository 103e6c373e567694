"""Re-check a certificate file using only the stored data.

The verifier rebuilds the algebra, the operator and both elements from JSON,
applies the operator once, and compares exactly. It never touches the
constructions that produced the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .io import backend_from_json, element_from_json, parse_operator
from .parsing import format_element


@dataclass
class Verdict:
    ok: bool
    construction: str
    expected: str
    actual: str
    diff: list

    def to_json(self) -> dict:
        return {
            "verified": self.ok,
            "construction": self.construction,
            "target": self.expected,
            "image_of_preimage": self.actual,
            "diff": self.diff,
        }


def _coefficient_diff(expected, actual) -> list:
    """Positions where two elements differ, as (position, expected, actual) strings."""
    from .polyext import PolyExtElem

    out = []
    if isinstance(expected, PolyExtElem):
        top = max(expected.degree, actual.degree, 0)
        for k in range(top + 1):
            a, b = expected.coeff(k), actual.coeff(k)
            if a != b:
                out.append({"degree": k, "expected": format_element(a), "actual": format_element(b)})
        return out
    names = expected.algebra.basis
    for name, a, b in zip(names, expected.coeffs, actual.coeffs):
        if a != b:
            out.append({"basis": name, "expected": str(a), "actual": str(b)})
    return out


def verify_certificate(data: dict) -> Verdict:
    try:
        algebra = backend_from_json(data["backend"])
        op = parse_operator(data["operator"], algebra)
        target = element_from_json(algebra, data["target"])
        preimage = element_from_json(algebra, data["preimage"])
        construction = data.get("construction", "?")
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
    image = op(preimage)
    ok = image == target
    diff = [] if ok else _coefficient_diff(target, image)
    return Verdict(ok, construction, format_element(target), format_element(image), diff)
