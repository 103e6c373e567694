"""Which product rule does an operator satisfy, and is it locally nilpotent?"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from ..algebra import FinDimAlgebra
from ..errors import NotEDerivation, NotEndomorphism
from ..linalg import Mat
from ..operators import LinearMap, FunctionOp
from ..polyext import PolyExtAlgebra, PolyOp


@dataclass(frozen=True)
class LNVerdict:
    status: str  # "yes" | "no" | "unknown"
    witness: Any = None

    def __bool__(self):
        return self.status == "yes"


@dataclass
class OpClass:
    is_derivation: bool
    is_endomorphism: bool
    is_ederivation: bool
    is_locally_nilpotent: LNVerdict
    failure_witness: tuple | None = None
    endomorphism_witness: tuple | None = None
    sampled: bool = False
    pairs_checked: int = 0
    notes: list = field(default_factory=list)


def _laws(T, a, b):
    ab = a * b
    Ta, Tb, Tab = T(a), T(b), T(ab)
    deriv = Tab == Ta * b + a * Tb
    endo = Tab == Ta * Tb
    ederiv = Tab == Ta * b + a * Tb - Ta * Tb
    return deriv, endo, ederiv


def _poly_pairs(P: PolyExtAlgebra, rng, samples: int, max_degree: int):
    B = P.coeff_algebra
    gens = [P.constant(b) for b in B.basis_elements()]
    gens += [P.monomial(b, 1) for b in B.basis_elements()]
    pairs = [(a, b) for a in gens for b in gens]
    for _ in range(samples):
        pairs.append((P.random_element(rng, max_degree), P.random_element(rng, max_degree)))
    return pairs


def _ln_verdict(T, A) -> LNVerdict:
    if isinstance(T, LinearMap):
        idx = T.nilpotency()
        if idx is not None:
            return LNVerdict("yes", {"nilpotency_index": idx})
        M = T.matrix ** A.dim
        for j in range(A.dim):
            if any(x != 0 for x in M.column(j)):
                return LNVerdict("no", {"element": A.basis[j], "reason": f"T^{A.dim} does not vanish on {A.basis[j]}"})
    if isinstance(T, PolyOp):
        if T.ln_status():
            return LNVerdict("yes", {"reason": "strictly lowers t-degree"})
        B = T.algebra.coeff_algebra
        if T.kind == "identity" or T.kind == "shift_endo":
            return LNVerdict("no", {"element": B.basis[0], "reason": "fixes every constant"})
    if isinstance(T, FunctionOp) and T.ln_status():
        return LNVerdict("yes", {"reason": "inherited from construction"})
    return LNVerdict("unknown")


def classify(T, A=None, samples: int = 200, max_degree: int = 6, seed: int = 0, use_cache: bool = True) -> OpClass:
    """Check the derivation / endomorphism / E-derivation laws and local nilpotency.

    Finite-dimensional: exact on all basis pairs. B[t]: generator pairs plus
    ``samples`` random pairs up to ``max_degree`` (result flagged ``sampled``).
    """
    A = A or T.algebra
    cache = getattr(T, "cache", None)
    key = ("classify", samples, max_degree, seed)
    if use_cache and cache is not None and key in cache:
        return cache[key]
    if isinstance(A, FinDimAlgebra):
        es = A.basis_elements()
        pairs = [(a, b) for a in es for b in es]
        sampled = False
    else:
        pairs = _poly_pairs(A, random.Random(seed), samples, max_degree)
        sampled = True
    is_d = is_e = is_ed = True
    wd = we = None
    for a, b in pairs:
        d, e, ed = _laws(T, a, b)
        if not d and is_d:
            is_d, wd = False, (a, b)
        if not e and is_e:
            is_e, we = False, (a, b)
        if not ed:
            is_ed = False
        if not (is_d or is_e or is_ed):
            break
    result = OpClass(
        is_derivation=is_d,
        is_endomorphism=is_e,
        is_ederivation=is_ed,
        is_locally_nilpotent=_ln_verdict(T, A),
        failure_witness=wd,
        endomorphism_witness=we,
        sampled=sampled,
        pairs_checked=len(pairs),
    )
    if use_cache and cache is not None:
        cache[key] = result
    return result


def require_ederivation(delta):
    if not classify(delta).is_ederivation:
        raise NotEDerivation(f"{getattr(delta, 'name', delta)!r} is not an E-derivation")


def require_endomorphism(phi):
    if not classify(phi).is_endomorphism:
        raise NotEndomorphism(f"{getattr(phi, 'name', phi)!r} is not an algebra endomorphism")


def derivation_space(A: FinDimAlgebra) -> list[LinearMap]:
    """Basis of Der(A): nullspace of the Leibniz constraints on the matrix entries.

    Unknown ``d[k][m]`` is coordinate ``k`` of ``D(b_m)``, flattened as ``k*n + m``.
    """
    from ..linalg import nullspace

    n = A.dim
    c = A.table
    rows = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                row = [0] * (n * n)
                # D(b_i b_j)_k = sum_m c[i][j][m] d[k][m]
                for m in range(n):
                    if c[i][j][m]:
                        row[k * n + m] += c[i][j][m]
                # - (D(b_i) b_j)_k = - sum_m d[m][i] c[m][j][k]
                for m in range(n):
                    if c[m][j][k]:
                        row[m * n + i] -= c[m][j][k]
                # - (b_i D(b_j))_k = - sum_m d[m][j] c[i][m][k]
                for m in range(n):
                    if c[i][m][k]:
                        row[m * n + j] -= c[i][m][k]
                if any(row):
                    rows.append(row)
    if not rows:
        rows = [[0] * (n * n)]
    basis = nullspace(Mat.from_rows(rows))
    return [LinearMap(A, Mat(n, n, v), f"D{idx}") for idx, v in enumerate(basis)]
