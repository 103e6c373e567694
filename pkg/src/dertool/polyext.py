"""Polynomial extension B[t] of a finite-dimensional algebra B (t central)."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from .algebra import AlgElem, FinDimAlgebra
from .arith import q, q_str
from .errors import (
    AlgebraMismatch,
    DegreeCapExceeded,
    InputError,
    NotPreimage,
    NotUnital,
    UnsupportedOperator,
)


class PolyExtAlgebra:
    def __init__(self, coeff_algebra: FinDimAlgebra, degree_cap: int = 64):
        if degree_cap < 1:
            raise InputError("degree_cap must be >= 1")
        self.coeff_algebra = coeff_algebra
        self.degree_cap = degree_cap
        self.name = f"{coeff_algebra.name}[t]"

    def __repr__(self):
        return f"PolyExtAlgebra({self.coeff_algebra.name!r}, degree_cap={self.degree_cap})"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, PolyExtAlgebra):
            return NotImplemented
        return self.coeff_algebra == other.coeff_algebra and self.degree_cap == other.degree_cap

    def __hash__(self):
        return hash((self.coeff_algebra, self.degree_cap))

    @property
    def is_unital(self) -> bool:
        return self.coeff_algebra.is_unital

    def zero(self) -> "PolyExtElem":
        return PolyExtElem(self, ())

    def one(self) -> "PolyExtElem":
        return PolyExtElem(self, (self.coeff_algebra.one(),))

    def t(self) -> "PolyExtElem":
        return self.monomial(self.coeff_algebra.one(), 1)

    def constant(self, b: AlgElem) -> "PolyExtElem":
        return PolyExtElem(self, (b,))

    def monomial(self, b: AlgElem, k: int) -> "PolyExtElem":
        return PolyExtElem(self, [self.coeff_algebra.zero()] * k + [b])

    def basis_monomials(self, max_degree: int) -> list["PolyExtElem"]:
        return [self.monomial(b, k) for k in range(max_degree + 1) for b in self.coeff_algebra.basis_elements()]

    def random_element(self, rng, max_degree: int = 6, lo: int = -3, hi: int = 3) -> "PolyExtElem":
        deg = rng.randint(0, max_degree)
        return PolyExtElem(self, [self.coeff_algebra.random_element(rng, lo, hi) for _ in range(deg + 1)])

    def from_vector(self, v: Sequence, max_degree: int) -> "PolyExtElem":
        n = self.coeff_algebra.dim
        return PolyExtElem(
            self, [AlgElem(self.coeff_algebra, v[k * n : (k + 1) * n]) for k in range(max_degree + 1)]
        )

    def to_json(self) -> dict:
        return {"kind": "poly", "algebra": self.coeff_algebra.to_json(), "degree_cap": self.degree_cap}


class PolyExtElem:
    """sum_k coeffs[k] * t^k with coeffs in B; no trailing zero coefficient."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: PolyExtAlgebra, coeffs: Sequence[AlgElem]):
        cs = list(coeffs)
        for c in cs:
            if not isinstance(c, AlgElem) or c.algebra != algebra.coeff_algebra:
                raise AlgebraMismatch("coefficient not in the coefficient algebra")
        while cs and cs[-1].is_zero():
            cs.pop()
        if len(cs) - 1 > algebra.degree_cap:
            raise DegreeCapExceeded(f"degree {len(cs) - 1} exceeds cap {algebra.degree_cap}")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("PolyExtElem is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> AlgElem:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.algebra.coeff_algebra.zero()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _same(self, other):
        if not isinstance(other, PolyExtElem) or other.algebra != self.algebra:
            raise AlgebraMismatch("elements of different polynomial algebras")

    def __add__(self, other):
        self._same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyExtElem(self.algebra, [self.coeff(k) + other.coeff(k) for k in range(n)])

    def __sub__(self, other):
        self._same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyExtElem(self.algebra, [self.coeff(k) - other.coeff(k) for k in range(n)])

    def __neg__(self):
        return PolyExtElem(self.algebra, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PolyExtElem(self.algebra, [c * other for c in self.coeffs])
        return pmul(self, other)

    def __rmul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return PolyExtElem(self.algebra, [scalar * c for c in self.coeffs])
        return NotImplemented

    def __truediv__(self, scalar):
        return self * (Fraction(1) / scalar)

    def __eq__(self, other):
        if not isinstance(other, PolyExtElem):
            return NotImplemented
        return self.coeffs == other.coeffs and self.algebra == other.algebra

    def __hash__(self):
        return hash(tuple(c.coeffs for c in self.coeffs))

    def shift_degree(self, k: int) -> "PolyExtElem":
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return PolyExtElem(self.algebra, [self.algebra.coeff_algebra.zero()] * k + list(self.coeffs))

    def to_vector(self, max_degree: int) -> tuple:
        out = []
        for k in range(max_degree + 1):
            out.extend(self.coeff(k).coeffs)
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "coeffs": [[q_str(x) for x in c.coeffs] for c in self.coeffs],
        }

    def __repr__(self):
        from .parsing import format_element

        return f"PolyExtElem({format_element(self)})"


def poly_elem_from_json(P: PolyExtAlgebra, data) -> PolyExtElem:
    coeffs = data["coeffs"] if isinstance(data, dict) else data
    B = P.coeff_algebra
    return PolyExtElem(P, [AlgElem(B, [q(x) for x in c]) for c in coeffs])


def pmul(a: PolyExtElem, b: PolyExtElem) -> PolyExtElem:
    a._same(b)
    if a.is_zero() or b.is_zero():
        return a.algebra.zero()
    P = a.algebra
    deg = a.degree + b.degree
    B = P.coeff_algebra
    out = [B.zero() for _ in range(deg + 1)]
    for i, x in enumerate(a.coeffs):
        if x.is_zero():
            continue
        for j, y in enumerate(b.coeffs):
            out[i + j] = out[i + j] + x * y
    while out and out[-1].is_zero():
        out.pop()
    if len(out) - 1 > P.degree_cap:
        raise DegreeCapExceeded(f"product degree {len(out) - 1} exceeds cap {P.degree_cap}")
    return PolyExtElem(P, out)


class PolyOp:
    """Built-in operators on B[t].

    kinds: ``coefficient_derivative`` (c * d/dt), ``shift_endo`` (t -> t + c),
    ``identity``, ``composite`` (I - shift_endo(c)).
    """

    KINDS = ("coefficient_derivative", "shift_endo", "identity", "composite")

    def __init__(self, algebra: PolyExtAlgebra, kind: str, c=1):
        if kind not in self.KINDS:
            raise UnsupportedOperator(f"unknown operator kind {kind!r}")
        if kind in ("shift_endo", "composite") and not algebra.is_unital:
            raise NotUnital("shift t -> t + c needs a unital coefficient algebra")
        self.algebra = algebra
        self.kind = kind
        self.c = q(c)
        self.cache: dict = {}

    def __repr__(self):
        return f"PolyOp({self.describe()})"

    def __eq__(self, other):
        if not isinstance(other, PolyOp):
            return NotImplemented
        return (self.algebra, self.kind, self.c) == (other.algebra, other.kind, other.c)

    def __hash__(self):
        return hash((self.kind, self.c))

    def describe(self) -> str:
        c = q_str(self.c)
        if self.kind == "coefficient_derivative":
            return "d/dt" if self.c == 1 else f"{c}*d/dt"
        if self.kind == "shift_endo":
            return f"shift({c})"
        if self.kind == "composite":
            return f"I-shift({c})"
        return "I"

    def ln_status(self) -> bool:
        # both strictly lower t-degree on every nonzero element
        if self.kind == "coefficient_derivative" or self.kind == "composite":
            return True
        return False

    def __call__(self, a: PolyExtElem) -> PolyExtElem:
        return apply_op(self, a)


def _shift(a: PolyExtElem, c: Fraction) -> PolyExtElem:
    if c == 0 or a.is_zero():
        return a
    B = a.algebra.coeff_algebra
    out = [B.zero() for _ in range(len(a.coeffs))]
    for k, ak in enumerate(a.coeffs):
        if ak.is_zero():
            continue
        # ak (t + c)^k, c central
        for j in range(k + 1):
            out[j] = out[j] + ak * (comb(k, j) * c ** (k - j))
    return PolyExtElem(a.algebra, out)


def apply_op(T: PolyOp, a: PolyExtElem) -> PolyExtElem:
    if a.algebra != T.algebra:
        raise AlgebraMismatch("operator and element live in different algebras")
    if T.kind == "identity":
        return a
    if T.kind == "coefficient_derivative":
        return PolyExtElem(a.algebra, [ak * (k * T.c) for k, ak in enumerate(a.coeffs) if k > 0])
    if T.kind == "shift_endo":
        return _shift(a, T.c)
    return a - _shift(a, T.c)


def solve_slice(T: PolyOp, target: PolyExtElem) -> PolyExtElem | None:
    """Some ``u`` with ``T(u) = target`` (constant of integration / kernel part 0)."""
    P = target.algebra
    if T.kind == "coefficient_derivative":
        if T.c == 0:
            return P.zero() if target.is_zero() else None
        if target.degree + 1 > P.degree_cap:
            raise DegreeCapExceeded("antiderivative would exceed the degree cap")
        B = P.coeff_algebra
        return PolyExtElem(P, [B.zero()] + [ak / ((k + 1) * T.c) for k, ak in enumerate(target.coeffs)])
    if T.kind == "composite":
        if target.is_zero():
            return P.zero()
        if T.c == 0:
            return None
        if target.degree + 1 > P.degree_cap:
            raise DegreeCapExceeded("preimage would exceed the degree cap")
        # (I - shift_c)(b t^k) = -sum_{j<k} C(k,j) c^(k-j) b t^j: top-down back-substitution
        B = P.coeff_algebra
        n = target.degree
        u = [B.zero() for _ in range(n + 2)]
        residual = list(target.coeffs) + [B.zero()]
        for k in range(n + 1, 0, -1):
            need = residual[k - 1]
            if need.is_zero():
                continue
            uk = need / (-k * T.c)
            u[k] = uk
            for j in range(k):
                residual[j] = residual[j] + uk * (comb(k, j) * T.c ** (k - j))
        result = PolyExtElem(P, u)
        if apply_op(T, result) != target:
            raise NotPreimage("back-substitution failed to reproduce the target")
        return result
    raise UnsupportedOperator(f"solve_slice does not support {T.describe()}")


def normalize_s(D, e: PolyExtElem, s0: PolyExtElem) -> PolyExtElem:
    """Replace ``s0`` by ``e*s0*e``; checks ``D(s) = e`` afterwards."""
    s = e * s0 * e
    if D(s) != e:
        raise NotPreimage("D(e s e) != e")
    return s
