"""Constructive preimages: kernel projections and re-checkable certificates.

Setting: D locally nilpotent, e idempotent with D(e) = 0, s in eAe with
D(s) = e, and the convention s^0 = e.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from ..algebra import FinDimAlgebra
from ..errors import InputError, KernelCheckFailed, NotLocallyNilpotent, PreconditionFailed
from ..operators import describe_op, orbit
from ..parsing import format_element
from ..polyext import PolyOp
from .correspondence import h_inverse_apply

CONSTRUCTIONS = ("eqn3_3", "eqn3_4", "two_sided", "ederiv_via_hD", "spectral_block", "unit_surjectivity")


@dataclass
class Certificate:
    operator: object
    target: object
    preimage: object
    construction: str
    meta: dict = field(default_factory=dict)

    @property
    def algebra(self):
        return self.target.algebra

    def holds(self) -> bool:
        return self.operator(self.preimage) == self.target

    def to_json(self) -> dict:
        from ..io import backend_json, element_json, operator_json

        meta = {k: (element_json(v) if hasattr(v, "algebra") else v) for k, v in self.meta.items()}
        return {
            "backend": backend_json(self.algebra),
            "operator": operator_json(self.operator),
            "target": element_json(self.target),
            "preimage": element_json(self.preimage),
            "construction": self.construction,
            "meta": meta,
            "text": {
                "target": format_element(self.target),
                "preimage": format_element(self.preimage),
            },
        }


def _certified(op, target, preimage, construction, meta) -> Certificate:
    cert = Certificate(op, target, preimage, construction, meta)
    if not cert.holds():
        raise KernelCheckFailed(f"{construction} construction produced a wrong preimage")
    return cert


class SPowers:
    """s^k with s^0 = e, cached."""

    def __init__(self, s, e):
        self.pows = [e, s]

    def __getitem__(self, k):
        while len(self.pows) <= k:
            self.pows.append(self.pows[-1] * self.pows[1])
        return self.pows[k]


def check_preconditions(D, s, e):
    if D.ln_status() is False:
        raise NotLocallyNilpotent(f"{describe_op(D)} is not locally nilpotent")
    if e * e != e:
        raise PreconditionFailed("e^2 != e")
    if not D(e).is_zero():
        raise PreconditionFailed("D(e) != 0")
    if D(s) != e:
        raise PreconditionFailed("D(s) != e")
    if e * s * e != s:
        raise PreconditionFailed("s is not in eAe")


def _projection(D, s, e, a, side, pw=None):
    pw = pw or SPowers(s, e)
    acc = a.algebra.zero()
    for i, x in enumerate(orbit(D, a)):
        c = Fraction((-1) ** i, factorial(i))
        term = x * pw[i] if side == "left" else pw[i] * x
        acc = acc + term * c
    return acc


def kernel_projection(D, s, e, a, side: str = "left", check: bool = True):
    """phi_{-s}(a) = sum (-1)^i/i! D^i(a) s^i (side="left", powers of s on the right of D^i a)
    or psi_{-s}(a) = sum (-1)^i/i! s^i D^i(a) (side="right").

    The result is checked to lie in ker D.
    """
    if side not in ("left", "right"):
        raise InputError(f"side must be 'left' or 'right', not {side!r}")
    if check:
        check_preconditions(D, s, e)
    out = _projection(D, s, e, a, side)
    if not D(out).is_zero():
        raise KernelCheckFailed("kernel projection left ker D")
    return out


def phi_minus_s(D, s, e, a, check=True):
    return kernel_projection(D, s, e, a, "left", check)


def psi_minus_s(D, s, e, a, check=True):
    return kernel_projection(D, s, e, a, "right", check)


def reconstruct(D, s, e, a, side: str):
    """sum_j 1/j! phi(D^j a) s^j  (= a e)  or  sum_j 1/j! s^j psi(D^j a)  (= e a)."""
    pw = SPowers(s, e)
    acc = a.algebra.zero()
    proj_side = "left" if side == "right" else "right"
    for j, x in enumerate(orbit(D, a)):
        p = _projection(D, s, e, x, proj_side, pw)
        term = p * pw[j] if side == "right" else pw[j] * p
        acc = acc + term * Fraction(1, factorial(j))
    return acc


def preimage_one_sided(D, s, e, a, side: str, check: bool = True) -> Certificate:
    """Certificate for a*e (side="right") or e*a (side="left") in im D."""
    if check:
        check_preconditions(D, s, e)
    pw = SPowers(s, e)
    acc = a.algebra.zero()
    if side == "right":
        target = a * e
        for j, x in enumerate(orbit(D, a)):
            p = _projection(D, s, e, x, "left", pw)
            acc = acc + (p * pw[j + 1]) * Fraction(1, factorial(j + 1))
        tag = "eqn3_3"
    elif side == "left":
        target = e * a
        for j, x in enumerate(orbit(D, a)):
            p = _projection(D, s, e, x, "right", pw)
            acc = acc + (pw[j + 1] * p) * Fraction(1, factorial(j + 1))
        tag = "eqn3_4"
    else:
        raise InputError(f"side must be 'left' or 'right', not {side!r}")
    return _certified(D, target, acc, tag, {"s": s, "e": e, "a": a, "side": side})


def preimage_two_sided(D, s, e, a, b, check: bool = True) -> Certificate:
    """Certificate for a*e*b in im D (double finite sum)."""
    if check:
        check_preconditions(D, s, e)
    pw = SPowers(s, e)
    left = [_projection(D, s, e, x, "left", pw) for x in orbit(D, a)]
    right = [_projection(D, s, e, y, "right", pw) for y in orbit(D, b)]
    acc = a.algebra.zero()
    for i, p in enumerate(left):
        if p.is_zero():
            continue
        for j, r in enumerate(right):
            if r.is_zero():
                continue
            c = Fraction(1, factorial(i) * factorial(j) * (i + j + 1))
            acc = acc + (p * pw[i + j + 1] * r) * c
    return _certified(D, a * e * b, acc, "two_sided", {"s": s, "e": e, "a": a, "b": b})


def d_solver(D):
    """A function w -> some u with D(u) = w (or None), for the operator's backend."""
    from ..linalg import solve_linear
    from ..operators import materialize

    A = D.algebra
    if isinstance(A, FinDimAlgebra):
        M = materialize(D).matrix

        def solve(w):
            x = solve_linear(M, w.coeffs)
            return None if x is None else A.element(x)

        return solve
    if isinstance(D, PolyOp):
        from ..polyext import solve_slice

        return lambda w: solve_slice(D, w)
    return lambda w: slice_solve(D, w)


def slice_solve(T, target, extra_degree: int = 1):
    """Solve T(u) = target on B[t] restricted to degree <= deg(target) + extra_degree.

    Builds the matrix of T on that finite slice and solves exactly.
    """
    from ..linalg import Mat, solve_linear

    P = target.algebra
    if target.is_zero():
        return P.zero()
    top = min(target.degree + extra_degree, P.degree_cap)
    monos = P.basis_monomials(top)
    images = [T(m) for m in monos]
    out_deg = max([target.degree] + [im.degree for im in images])
    M = Mat.from_columns([im.to_vector(out_deg) for im in images], (out_deg + 1) * P.coeff_algebra.dim)
    x = solve_linear(M, target.to_vector(out_deg))
    if x is None:
        return None
    return P.from_vector(x, top)


def ederiv_preimage(delta, v, D=None, d_cert: Certificate | None = None) -> Certificate:
    """Certificate delta(x) = v for an LN E-derivation, routed through D = log(I - delta).

    Since delta = D h(D) with h(D) invertible, x is a D-preimage of h(D)^-1(v).
    With ``d_cert`` (D(u) = v) the preimage is x = h(D)^-1(u); otherwise a
    D-preimage of h(D)^-1(v) is solved for directly.
    """
    from .correspondence import lambda_operator

    if delta.ln_status() is False:
        raise NotLocallyNilpotent(f"{describe_op(delta)} is not locally nilpotent")
    if D is None:
        D = lambda_operator(delta)
    if d_cert is not None:
        if d_cert.target != v:
            raise PreconditionFailed("supplied certificate is for a different target")
        if not d_cert.holds():
            raise PreconditionFailed("supplied certificate does not verify")
        x = h_inverse_apply(D, d_cert.preimage)
        route = "h_inverse_of_D_preimage"
    else:
        w = h_inverse_apply(D, v)
        x = d_solver(D)(w)
        if x is None:
            from ..errors import NotInImage

            raise NotInImage(f"{format_element(v)} is not in the image")
        route = "D_preimage_of_h_inverse"
    meta = {"route": route, "D": describe_op(D)}
    if d_cert is not None:
        meta.update({k: val for k, val in d_cert.meta.items() if k in ("s", "e")})
        meta["d_construction"] = d_cert.construction
    return _certified(delta, v, x, "ederiv_via_hD", meta)


def certify(op, target, e=None, s=None, a=None, b=None, side: str | None = None) -> Certificate:
    """Pick a construction for ``target`` and return its verified certificate.

    Finite-dimensional operators use the spectral blocks. On B[t] a derivation D
    (or the log of an E-derivation) is paired with an idempotent ``e`` (default 1)
    and an ``s`` with D(s) = e (solved for when not given). ``a`` and ``b``
    request the two-sided target a*e*b; otherwise the target must lie in Ae or eA.
    """
    from ..polyext import normalize_s
    from .classify import classify
    from .correspondence import lambda_operator, scaled_derivative_for
    from .grading import preimage_spectral

    A = target.algebra
    cls = classify(op)
    if not (cls.is_derivation or cls.is_ederivation):
        raise InputError(f"{describe_op(op)} is neither a derivation nor an E-derivation")
    if isinstance(A, FinDimAlgebra):
        return preimage_spectral(op, "derivation" if cls.is_derivation else "ederivation", target)
    if cls.is_derivation:
        D, delta = op, None
    else:
        delta = op
        D = scaled_derivative_for(op) or lambda_operator(op)
    e = A.one() if e is None else e
    if s is None:
        s = d_solver(D)(e)
        if s is None:
            raise PreconditionFailed(f"no s with D(s) = {format_element(e)}")
    s = normalize_s(D, e, s)
    if a is not None or b is not None:
        a = A.one() if a is None else a
        b = A.one() if b is None else b
        if a * e * b != target:
            raise InputError("target differs from a*e*b")
        d_cert = preimage_two_sided(D, s, e, a, b)
    else:
        if side is None:
            if target * e == target:
                side = "right"
            elif e * target == target:
                side = "left"
            else:
                raise InputError("target lies in neither Ae nor eA; give a and b for a two-sided target")
        d_cert = preimage_one_sided(D, s, e, target, side)
        if d_cert.target != target:
            raise InputError(f"target is not fixed by multiplication with e on the {side}")
    if delta is None:
        return d_cert
    return ederiv_preimage(delta, target, D, d_cert)
