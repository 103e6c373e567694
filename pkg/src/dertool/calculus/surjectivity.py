"""Orbit of the unit under an endomorphism, and the "1 in image => onto" analysis."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra import FinDimAlgebra
from ..errors import InputError, NoStabilization, NotUnital, RankMismatch
from ..linalg import Mat, invert_shifted, rank, solve_linear, span_rank
from ..operators import LinearMap, identity_minus, materialize
from ..parsing import format_element
from ..polyext import PolyExtAlgebra, PolyOp, solve_slice
from .classify import classify, require_endomorphism


@dataclass
class UnitOrbit:
    d: int
    e_d: object
    branch: str  # "nilpotent" | "stable"
    orbit: list


def unit_orbit(phi, A: FinDimAlgebra | None = None, check: bool = True) -> UnitOrbit:
    """Iterate e_i = phi^i(1) until it repeats or vanishes.

    Verifies e_i e_j = e_j e_i = e_j for all computed 0 <= i <= j.
    """
    A = A or phi.algebra
    if not A.is_unital:
        raise NotUnital(f"algebra {A.name} has no unit")
    if check:
        require_endomorphism(phi)
    es = [A.one()]
    bound = A.dim + 1
    d = None
    for i in range(1, bound + 1):
        es.append(phi(es[-1]))
        if es[i].is_zero():
            d = i
            break
        nxt = phi(es[i])
        if nxt == es[i]:
            d = i
            es.append(nxt)
            break
    if d is None:
        raise NoStabilization(f"phi^i(1) did not stabilize within {bound} steps")
    for i in range(len(es)):
        for j in range(i, len(es)):
            if es[i] * es[j] != es[j] or es[j] * es[i] != es[j]:
                raise NoStabilization(f"e_{i} e_{j} != e_{j}")
    e_d = es[d]
    return UnitOrbit(d, e_d, "nilpotent" if e_d.is_zero() else "stable", es[: d + 1])


@dataclass
class SurjectivityReport:
    status: str  # "surjective" | "not_in_image"
    kind: str
    preimage_of_one: object = None
    rank: int | None = None
    dim: int | None = None
    chain: dict = field(default_factory=dict)
    generator: object = None

    def to_json(self) -> dict:
        out = {"status": self.status, "kind": self.kind}
        if self.preimage_of_one is not None:
            out["preimage_of_one"] = format_element(self.preimage_of_one)
        if self.rank is not None:
            out["rank"] = self.rank
            out["dim"] = self.dim
        if self.chain:
            out["chain"] = {k: (format_element(v) if hasattr(v, "algebra") else v) for k, v in self.chain.items()}
        return out


def _findim_ederivation(delta: LinearMap, A: FinDimAlgebra) -> SurjectivityReport:
    n = A.dim
    phi = identity_minus(delta)
    u = solve_linear(delta.matrix, A.one().coeffs)
    if u is None:
        return SurjectivityReport("not_in_image", "ederivation", dim=n)
    u = A.element(u)
    r = rank(delta.matrix)
    if r != n:
        raise RankMismatch(f"1 is in the image but rank is {r} < {n}")
    orb = unit_orbit(phi, A)
    chain = {"d": orb.d, "e_d": orb.e_d, "branch": orb.branch}
    if orb.branch == "nilpotent":
        # phi nilpotent: delta = I - phi inverted by the finite series
        inv = invert_shifted(Mat.identity(n), phi.matrix)
        if delta.matrix * inv != Mat.identity(n):
            raise RankMismatch("series inverse of I - phi failed")
        chain["inverse_by_series"] = True
    else:
        e_d = orb.e_d
        phi_d = phi.power(orb.d)
        delta_d = LinearMap(A, Mat.identity(n) - phi_d.matrix, "delta_d")
        w = (e_d * u) * Fraction(1, orb.d)
        if delta_d(w) != e_d:
            raise RankMismatch("delta_d(e_d u / d) != e_d")
        comp = A.one() - e_d
        if not all(phi_d(comp * b).is_zero() for b in A.basis_elements()):
            raise RankMismatch("phi^d does not vanish on (1 - e_d)A")
        halves = [(e_d * b).coeffs for b in A.basis_elements()] + [(comp * b).coeffs for b in A.basis_elements()]
        if span_rank(halves, n) != n:
            raise RankMismatch("e_d A + (1 - e_d) A != A")
        chain["e_d_preimage"] = w
    return SurjectivityReport("surjective", "ederivation", u, r, n, chain)


def _findim_derivation(D: LinearMap, A: FinDimAlgebra) -> SurjectivityReport:
    n = A.dim
    u = solve_linear(D.matrix, A.one().coeffs)
    if u is None:
        return SurjectivityReport("not_in_image", "derivation", dim=n)
    r = rank(D.matrix)
    if r != n:
        raise RankMismatch(f"1 is in the image but rank is {r} < {n}")
    return SurjectivityReport("surjective", "derivation", A.element(u), r, n, {"e": A.one()})


def surjectivity_analysis(delta, A=None) -> SurjectivityReport:
    A = A or delta.algebra
    if not A.is_unital:
        raise NotUnital(f"algebra {A.name} has no unit")
    if isinstance(A, FinDimAlgebra):
        delta = materialize(delta, A)
        cls = classify(delta)
        if cls.is_ederivation:
            return _findim_ederivation(delta, A)
        if cls.is_derivation:
            return _findim_derivation(delta, A)
        raise InputError("operator is neither a derivation nor an E-derivation")
    if isinstance(A, PolyExtAlgebra):
        if not isinstance(delta, PolyOp) or delta.kind not in ("composite", "coefficient_derivative"):
            raise InputError("surjectivity on B[t] supports d/dt and I-shift(c)")
        kind = "derivation" if delta.kind == "coefficient_derivative" else "ederivation"
        u = solve_slice(delta, A.one())
        if u is None:
            return SurjectivityReport("not_in_image", kind)
        gen = lambda target: solve_slice(delta, target)
        return SurjectivityReport("surjective", kind, u, chain={"e": A.one()}, generator=gen)
    raise InputError(f"unsupported algebra {A!r}")
