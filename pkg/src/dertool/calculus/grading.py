"""Eigen-gradings from the Jordan-Chevalley decomposition, and the image formula.

For a derivation D = Ds + Dn the Ds-eigenspaces grade the algebra additively
(A_l A_m in A_{l+m}); for an endomorphism phi = Ps + Pn multiplicatively
(A_l A_m in A_{lm}).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra import AlgElem, FinDimAlgebra
from ..arith import UniPoly, q_str, rational_roots
from ..errors import GradingViolation, InputError, NotSplit, StructureMismatch
from ..linalg import Mat, image_basis, jordan_chevalley, nullspace, span_rank, subspace_contains, subspaces_equal
from ..operators import LinearMap, materialize


@dataclass
class GradingDecomp:
    kind: str
    eigenvalues: list
    blocks: dict  # eigenvalue -> list of coefficient vectors
    semisimple_part: LinearMap
    nilpotent_part: LinearMap
    reciprocal_pairs: list = field(default_factory=list)

    def block(self, lam) -> list[tuple]:
        return self.blocks.get(Fraction(lam), [])

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "eigenvalues": [q_str(l) for l in self.eigenvalues],
            "blocks": {q_str(l): [[q_str(x) for x in v] for v in vs] for l, vs in self.blocks.items()},
            "semisimple": self.semisimple_part.matrix.to_json(),
            "nilpotent": self.nilpotent_part.matrix.to_json(),
            "reciprocal_pairs": [[q_str(a), q_str(b)] for a, b in self.reciprocal_pairs],
        }


def split_eigenvalues(m: UniPoly) -> list[Fraction]:
    """Distinct rational roots of the squarefree part of ``m``; NotSplit otherwise."""
    from ..arith import squarefree_part

    f = squarefree_part(m)
    roots = rational_roots(f)
    rest = f // UniPoly.from_roots(roots)
    if rest.degree > 0:
        raise NotSplit(rest)
    return roots


def grade(T, kind: str, A: FinDimAlgebra | None = None) -> GradingDecomp:
    if kind not in ("derivation", "endomorphism"):
        raise InputError(f"kind must be 'derivation' or 'endomorphism', not {kind!r}")
    A = A or T.algebra
    if not isinstance(A, FinDimAlgebra):
        raise InputError("grading needs a finite-dimensional algebra")
    T = materialize(T, A)
    jc = jordan_chevalley(T.matrix)
    eig = split_eigenvalues(jc.minimal_polynomial)
    n = A.dim
    blocks = {}
    for lam in eig:
        blocks[lam] = nullspace(jc.semisimple - Mat.identity(n) * lam)
    total = [v for vs in blocks.values() for v in vs]
    if span_rank(total, n) != n or len(total) != n:
        raise GradingViolation("eigenspaces do not span the algebra")
    for lam, vs in blocks.items():
        for v in vs:
            if not subspace_contains(vs, [T.matrix.apply(v)], n):
                raise GradingViolation(f"block {lam} is not invariant")
    S = jc.semisimple
    for lam, vs in blocks.items():
        for mu, ws in blocks.items():
            nu = lam + mu if kind == "derivation" else lam * mu
            for v in vs:
                for w in ws:
                    p = A.mul_vectors(v, w)
                    if any(x != 0 for x in (S - Mat.identity(n) * nu).apply(p)):
                        raise GradingViolation(f"A_{lam} * A_{mu} not in A_{nu}")
    recip = []
    if kind == "endomorphism":
        # recorded only; whether A_l e A_{1/l} lies in the image is left undecided
        for lam in eig:
            if lam not in (0, 1) and 1 / lam in blocks and lam <= 1 / lam:
                recip.append((lam, 1 / lam))
    return GradingDecomp(
        kind,
        eig,
        blocks,
        LinearMap(A, jc.semisimple, "S"),
        LinearMap(A, jc.nilpotent, "N"),
        recip,
    )


@dataclass
class ImageDecomp:
    basis: list  # plain image of the operator matrix
    structured: list  # assembled from the grading
    nilpotent_piece: list  # N(A_0) resp. Pn(A_1)
    blocks: dict
    grading: GradingDecomp
    kernel: list

    def to_json(self) -> dict:
        vec = lambda vs: [[q_str(x) for x in v] for v in vs]
        return {
            "image": vec(self.basis),
            "structured": vec(self.structured),
            "nilpotent_piece": vec(self.nilpotent_piece),
            "full_blocks": {q_str(l): vec(vs) for l, vs in self.blocks.items()},
            "kernel": vec(self.kernel),
            "grading": self.grading.to_json(),
        }


def image_decomposition(T, kind: str, A: FinDimAlgebra | None = None) -> ImageDecomp:
    """Image of a derivation (resp. E-derivation delta = I - phi) two ways.

    Structured: Dn(A_0) + sum of A_l, l != 0 (resp. Pn(A_1) + sum of A_l, l != 1,
    grading taken from phi). Direct: column space of the matrix. Both must agree.
    """
    if kind not in ("derivation", "ederivation"):
        raise InputError(f"kind must be 'derivation' or 'ederivation', not {kind!r}")
    A = A or T.algebra
    T = materialize(T, A)
    n = A.dim
    if kind == "derivation":
        g = grade(T, "derivation", A)
        special = Fraction(0)
    else:
        phi = LinearMap(A, Mat.identity(n) - T.matrix, "phi")
        g = grade(phi, "endomorphism", A)
        special = Fraction(1)
    N = g.nilpotent_part.matrix
    piece = [N.apply(v) for v in g.block(special)]
    piece = [v for v in piece if any(x != 0 for x in v)]
    full = {lam: vs for lam, vs in g.blocks.items() if lam != special}
    structured = list(piece) + [v for vs in full.values() for v in vs]
    structured = image_basis(Mat.from_columns(structured, n)) if structured else []
    direct = image_basis(T.matrix)
    if not subspaces_equal(structured, direct, n):
        raise StructureMismatch("structured image differs from the direct image")
    kernel = nullspace(T.matrix)
    if not subspace_contains(g.block(special), kernel, n):
        raise StructureMismatch("kernel is not inside the distinguished block")
    return ImageDecomp(direct, structured, piece, full, g, kernel)


def preimage_spectral(T, kind: str, y: AlgElem):
    """Blockwise preimage: invert (l - 0) I + N on A_l, solve N on A_0 (resp. the
    E-derivation analogue with 1 - l). Returns a Certificate or raises NotInImage."""
    from ..errors import NotInImage
    from ..linalg import invert_shifted, solve_linear
    from .certificates import _certified

    A = y.algebra
    T = materialize(T, A)
    n = A.dim
    if kind == "derivation":
        g = grade(T, "derivation", A)
        special = Fraction(0)
    else:
        g = grade(LinearMap(A, Mat.identity(n) - T.matrix, "phi"), "endomorphism", A)
        special = Fraction(1)
    lams = list(g.blocks)
    cols = [v for lam in lams for v in g.blocks[lam]]
    coords = solve_linear(Mat.from_columns(cols, n), y.coeffs)
    N = g.nilpotent_part.matrix
    x = [Fraction(0)] * n
    pos = 0
    for lam in lams:
        vs = g.blocks[lam]
        part = [Fraction(0)] * n
        for v, c in zip(vs, coords[pos : pos + len(vs)]):
            part = [a + c * b for a, b in zip(part, v)]
        pos += len(vs)
        if all(c == 0 for c in part):
            continue
        if lam == special:
            # D = N on A_0 (resp. delta = -Pn on A_1)
            M = N if kind == "derivation" else -N
            sol = solve_linear(M, part)
            if sol is None:
                raise NotInImage("component in the distinguished block is not in the image")
        else:
            shift = lam if kind == "derivation" else 1 - lam
            # D|A_l = l I + N = F - G with F = l I, G = -N (resp. (1-l) I - Pn)
            G = -N if kind == "derivation" else N
            sol = invert_shifted(Mat.identity(n) * shift, G).apply(part)
        x = [a + b for a, b in zip(x, sol)]
    return _certified(T, y, A.element(x), "spectral_block", {"kind": kind})
