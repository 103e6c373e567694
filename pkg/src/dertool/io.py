"""JSON formats, the operator mini-language, and atomic file writes."""

from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path

from .algebra import AlgElem, FinDimAlgebra, builtin_algebra
from .arith import q
from .errors import InputError
from .linalg import Mat
from .operators import FunctionOp, LinearMap, identity_minus, inner_derivation
from .parsing import parse_element
from .polyext import PolyExtAlgebra, PolyExtElem, PolyOp, poly_elem_from_json


def atomic_write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


# --- algebras -----------------------------------------------------------------


def load_algebra(spec: str, degree_cap: int = 64):
    """Built-in name or JSON path; a ``[t]`` suffix gives the polynomial extension."""
    poly = spec.endswith("[t]")
    base = spec[:-3] if poly else spec
    if base.endswith(".json") or os.path.sep in base or os.path.exists(base):
        B = FinDimAlgebra.from_json(load_json(base))
    else:
        B = builtin_algebra(base)
    return PolyExtAlgebra(B, degree_cap) if poly else B


def backend_json(algebra) -> dict:
    if isinstance(algebra, PolyExtAlgebra):
        return algebra.to_json()
    return {"kind": "findim", "algebra": algebra.to_json()}


def backend_from_json(data):
    try:
        kind = data["kind"]
        B = FinDimAlgebra.from_json(data["algebra"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed backend description: {exc}") from None
    if kind == "poly":
        return PolyExtAlgebra(B, int(data.get("degree_cap", 64)))
    if kind == "findim":
        return B
    raise InputError(f"unknown backend kind {kind!r}")


# --- elements -------------------------------------------------------------------


def element_json(x):
    if isinstance(x, (AlgElem, PolyExtElem)):
        return x.to_json()
    return x


def element_from_json(algebra, data):
    if isinstance(algebra, PolyExtAlgebra):
        return poly_elem_from_json(algebra, data)
    coeffs = data["coeffs"] if isinstance(data, dict) else data
    return AlgElem(algebra, [q(c) for c in coeffs])


def read_element(text: str, algebra):
    """Expression text, or ``@file.json`` holding an element JSON."""
    if text.startswith("@"):
        return element_from_json(algebra, load_json(text[1:]))
    return parse_element(text, algebra)


# --- operators --------------------------------------------------------------------

_WRAP = re.compile(r"^(xi|log|exp|ad)\((.*)\)$")
_SHIFT = re.compile(r"^(I-)?shift\(([^)]*)\)$")
_DERIV = re.compile(r"^(?:(.+)\*)?d/dt$")


def operator_json(T):
    if isinstance(T, LinearMap):
        return {"kind": "matrix", "matrix": T.matrix.to_json()}
    if isinstance(T, PolyOp):
        return T.describe()
    if isinstance(T, FunctionOp):
        return T.name
    raise InputError(f"cannot serialize operator {T!r}")


def _matrix_file(path: str, algebra) -> Mat:
    M = Mat.from_json(load_json(path))
    if not isinstance(algebra, FinDimAlgebra):
        raise InputError("matrix operators need a finite-dimensional algebra")
    return M


def parse_operator(text, algebra):
    """Operator mini-language.

    ``d/dt``, ``c*d/dt``, ``shift(c)``, ``I-shift(c)``, ``I``, ``0``,
    ``matrix:<file>``, ``I-endo:<file>``, ``ad(<element>)``, and the wrappers
    ``xi(<op>)``, ``log(<op>)``, ``exp(<op>)``, ``I-(<op>)``. A dict
    ``{"kind": "matrix", "matrix": [...]}`` is also accepted.
    """
    from .calculus.correspondence import exp_operator, lambda_operator, xi_operator

    if isinstance(text, dict):
        if text.get("kind") != "matrix":
            raise InputError(f"unknown operator description {text!r}")
        if not isinstance(algebra, FinDimAlgebra):
            raise InputError("matrix operators need a finite-dimensional algebra")
        return LinearMap(algebra, Mat.from_json(text["matrix"]), "matrix")
    s = text.strip().replace(" ", "")
    if s == "I":
        if isinstance(algebra, FinDimAlgebra):
            return LinearMap.identity(algebra)
        return PolyOp(algebra, "identity")
    if s == "0":
        if isinstance(algebra, FinDimAlgebra):
            return LinearMap.zero(algebra)
        return PolyOp(algebra, "coefficient_derivative", 0)
    if s.startswith("matrix:"):
        return LinearMap(algebra, _matrix_file(s[7:], algebra), "matrix")
    if s.startswith("I-endo:"):
        phi = LinearMap(algebra, _matrix_file(s[7:], algebra), "phi")
        return identity_minus(phi)
    m = _SHIFT.match(s)
    if m:
        if not isinstance(algebra, PolyExtAlgebra):
            raise InputError("shift operators need a polynomial algebra B[t]")
        return PolyOp(algebra, "composite" if m.group(1) else "shift_endo", q(m.group(2) or "1"))
    m = _DERIV.match(s)
    if m:
        if not isinstance(algebra, PolyExtAlgebra):
            raise InputError("d/dt needs a polynomial algebra B[t]")
        return PolyOp(algebra, "coefficient_derivative", q(m.group(1) or "1"))
    if s.startswith("I-(") and s.endswith(")"):
        return identity_minus(parse_operator(s[3:-1], algebra))
    m = _WRAP.match(s)
    if m:
        head, inner = m.groups()
        if head == "ad":
            if not isinstance(algebra, FinDimAlgebra):
                raise InputError("ad(x) is supported on finite-dimensional algebras")
            return inner_derivation(parse_element(inner, algebra))
        op = parse_operator(inner, algebra)
        return {"xi": xi_operator, "log": lambda_operator, "exp": exp_operator}[head](op)
    raise InputError(f"unrecognized operator {text!r}")
