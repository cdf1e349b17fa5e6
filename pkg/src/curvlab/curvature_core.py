"""Curvature operators on so(n) and the algebra that drives everything else.

A curvature operator is a symmetric N x N matrix (N = n(n-1)/2) in the wedge
basis that satisfies the first Bianchi identity.  This module provides the
validated containers, the Bianchi projection onto that subspace, Ricci and
scalar traces, the O(n)-irreducible decomposition, the wedge product of
symmetric matrices, the sharp product (trace route, bracket route, and the
fast diagonal path), the quadratic map Q with its potential and trilinear
form, angles to the identity, and the rotation action.

Inner products: bivectors use the dot product in wedge coordinates (the
matrix pairing -1/2 tr(AB)); operators use the Frobenius pairing, so
||Id||^2 = N.  The (4,0)-tensor norm is twice the operator norm.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    ArgumentError,
    DegenerateInputError,
    PreconditionError,
    UnsupportedDimensionError,
)
from .lie_basis import (
    adjoint_rotation,
    dim_from_wedge_count,
    structure_constants,
    wedge_count,
    wedge_pairs,
    wedge_rank,
)

__all__ = [
    "SYMMETRY_TOL",
    "BIANCHI_TOL",
    "SymmetricOperator",
    "CurvatureOperator",
    "AlternativeOperator",
    "DecompositionReport",
    "identity_operator",
    "bianchi_residual",
    "bianchi_project",
    "ricci",
    "scalar",
    "decompose",
    "wedge_product",
    "sharp",
    "sharp_via_brackets",
    "sharp_pure",
    "alternative",
    "q_map",
    "potential",
    "potential_normalized",
    "tri",
    "angle_to_identity",
    "rotate",
    "tensor_norm",
]

SYMMETRY_TOL = 1e-12
BIANCHI_TOL = 1e-10


class SymmetricOperator:
    """Symmetric operator on the wedge space, without the Bianchi constraint."""

    def __init__(self, mat: np.ndarray, dim: int | None = None):
        mat = np.array(mat, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ArgumentError("operator matrix must be square")
        if dim is None:
            dim = dim_from_wedge_count(mat.shape[0])
        elif mat.shape[0] != wedge_count(dim):
            raise ArgumentError("matrix size does not match dimension")
        if np.max(np.abs(mat - mat.T), initial=0.0) >= SYMMETRY_TOL:
            raise ArgumentError("operator matrix is not symmetric")
        mat.setflags(write=False)
        self._mat = mat
        self.dim = int(dim)
        self.N = mat.shape[0]

    @property
    def mat(self) -> np.ndarray:
        return self._mat

    def __array__(self, dtype=None, copy=None):
        if dtype is not None and dtype != self._mat.dtype:
            return self._mat.astype(dtype)
        return self._mat

    def norm(self) -> float:
        return float(np.linalg.norm(self._mat))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, N={self.N})"

    # --- serialization: CSV is the bare matrix, JSON carries dim and basis ---

    def to_csv(self, path) -> None:
        np.savetxt(path, self._mat, delimiter=",")

    @classmethod
    def from_csv(cls, path):
        mat = np.loadtxt(path, delimiter=",", ndmin=2)
        return cls(mat)

    def to_json_dict(self) -> dict:
        return {"dim": self.dim, "basis": "lex-wedge", "mat": self._mat.tolist()}

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh)

    @classmethod
    def from_json_dict(cls, payload: dict):
        if payload.get("basis", "lex-wedge") != "lex-wedge":
            raise ArgumentError(f"unknown basis {payload.get('basis')!r}")
        return cls(np.asarray(payload["mat"], dtype=float), dim=payload.get("dim"))

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


class CurvatureOperator(SymmetricOperator):
    """Symmetric operator satisfying the first Bianchi identity."""

    def __init__(self, mat: np.ndarray, dim: int | None = None):
        super().__init__(mat, dim)
        res = bianchi_residual(self._mat)
        if res >= BIANCHI_TOL:
            raise ArgumentError(
                f"matrix violates the first Bianchi identity (residual {res:.3e})"
            )


class AlternativeOperator:
    """Symmetric n x n matrix with zero diagonal: entry (i,j) is R(e_i^e_j, e_i^e_j)."""

    def __init__(self, tilde: np.ndarray, dim: int | None = None):
        tilde = np.array(tilde, dtype=float)
        n = tilde.shape[0]
        if tilde.shape != (n, n):
            raise ArgumentError("alternative operator must be a square matrix")
        if dim is not None and dim != n:
            raise ArgumentError("matrix size does not match dimension")
        if np.max(np.abs(tilde - tilde.T), initial=0.0) >= SYMMETRY_TOL:
            raise ArgumentError("alternative operator must be symmetric")
        if np.max(np.abs(np.diag(tilde)), initial=0.0) >= SYMMETRY_TOL:
            raise ArgumentError("alternative operator must have zero diagonal")
        tilde.setflags(write=False)
        self.tilde = tilde
        self.dim = n

    def column_sums(self) -> np.ndarray:
        """Column sums of the symbol matrix; for a pure operator these are the
        diagonal Ricci entries, so they vanish exactly for Weyl operators."""
        return self.tilde.sum(axis=0)

    def __repr__(self) -> str:
        return f"AlternativeOperator(dim={self.dim})"


@dataclass(frozen=True)
class DecompositionReport:
    """Irreducible parts of a curvature operator under O(n)."""

    dim: int
    scal: float
    ricci0: np.ndarray
    scalar_part: np.ndarray
    ricci_part: np.ndarray
    weyl: CurvatureOperator
    scalar_part_norm: float
    ricci_part_norm: float
    weyl_norm: float
    angle: float


def identity_operator(n: int) -> CurvatureOperator:
    """The curvature operator of the unit sphere: the identity on the wedge space."""
    return CurvatureOperator(np.eye(wedge_count(n)), dim=n)


def _as_mat(x, name: str = "operator") -> tuple[np.ndarray, int]:
    if isinstance(x, SymmetricOperator):
        return x.mat, x.dim
    mat = np.asarray(x, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ArgumentError(f"{name} must be a square matrix")
    if np.max(np.abs(mat - mat.T), initial=0.0) >= SYMMETRY_TOL:
        raise ArgumentError(f"{name} must be symmetric")
    return mat, dim_from_wedge_count(mat.shape[0])


# --- first Bianchi identity ------------------------------------------------

@functools.lru_cache(maxsize=None)
def _bianchi_indices(n: int):
    """Pair-rank arrays (ij, kl, ik, jl, il, jk) over all quadruples i<j<k<l."""
    quads = list(itertools.combinations(range(1, n + 1), 4))
    if not quads:
        empty = np.zeros(0, dtype=int)
        return (empty,) * 6
    out = []
    for sel in ((0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)):
        out.append(
            np.array([wedge_rank(q[sel[0]], q[sel[1]], n) for q in quads], dtype=int)
        )
    return tuple(out)


def _bianchi_pairings(mat: np.ndarray, n: int) -> np.ndarray:
    """<R, G_q> for every quadruple generator G_q of the image of b."""
    ij, kl, ik, jl, il, jk = _bianchi_indices(n)
    return 2.0 * (mat[ij, kl] - mat[ik, jl] + mat[il, jk])


def bianchi_residual(mat) -> float:
    """Norm of the component of a symmetric operator orthogonal to ker(b)."""
    mat, n = _as_mat(mat)
    pair = _bianchi_pairings(mat, n)
    # each generator has squared norm 6, and distinct generators are orthogonal
    return float(np.sqrt(np.sum(pair**2) / 6.0))


def bianchi_project(s) -> CurvatureOperator:
    """Orthogonal projection of a symmetric operator onto ker(b).

    The complement of ker(b) is spanned by the 4-form generators G_q; the
    projection subtracts <S, G_q>/6 times each of them.
    """
    mat, n = _as_mat(s)
    ij, kl, ik, jl, il, jk = _bianchi_indices(n)
    coeff = _bianchi_pairings(mat, n) / 6.0
    out = mat.copy()
    np.subtract.at(out, (ij, kl), coeff)
    np.subtract.at(out, (kl, ij), coeff)
    np.add.at(out, (ik, jl), coeff)
    np.add.at(out, (jl, ik), coeff)
    np.subtract.at(out, (il, jk), coeff)
    np.subtract.at(out, (jk, il), coeff)
    return CurvatureOperator(out, dim=n)


# --- traces and decomposition ----------------------------------------------

@functools.lru_cache(maxsize=None)
def _vertex_embedding(n: int) -> np.ndarray:
    """Tensor B with B[a, i, :] the wedge coordinates of e_{a+1} ^ e_{i+1}."""
    N = wedge_count(n)
    B = np.zeros((n, n, N))
    for a in range(1, n + 1):
        for i in range(1, n + 1):
            if a < i:
                B[a - 1, i - 1, wedge_rank(a, i, n)] = 1.0
            elif a > i:
                B[a - 1, i - 1, wedge_rank(i, a, n)] = -1.0
    B.setflags(write=False)
    return B


def ricci(r) -> np.ndarray:
    """Ricci matrix Ric(v, w) = sum_i <R(v ^ e_i), w ^ e_i>."""
    mat, n = _as_mat(r)
    B = _vertex_embedding(n)
    return np.einsum("aiA,AB,biB->ab", B, mat, B, optimize=True)


def scalar(r) -> float:
    """Scalar curvature, the trace of the Ricci matrix (= 2 tr R)."""
    mat, _ = _as_mat(r)
    return 2.0 * float(np.trace(mat))


def wedge_product(a: np.ndarray, b: np.ndarray) -> SymmetricOperator:
    """Operator A ^ B on the wedge space: (A^B)(v^w) = 1/2 (Av^Bw + Bv^Aw)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ArgumentError("wedge_product expects two n x n matrices")
    for m in (a, b):
        if np.max(np.abs(m - m.T), initial=0.0) >= SYMMETRY_TOL:
            raise ArgumentError("wedge_product factors must be symmetric")
    n = a.shape[0]
    pairs = np.array(wedge_pairs(n)) - 1
    i, j = pairs[:, 0], pairs[:, 1]
    ix = np.ix_(i, i)  # rows (i,j), cols (p,q): first slots of each
    jx = np.ix_(j, j)
    iq = np.ix_(i, j)
    jp = np.ix_(j, i)
    out = 0.5 * (a[ix] * b[jx] + b[ix] * a[jx] - a[iq] * b[jp] - b[iq] * a[jp])
    return SymmetricOperator(0.5 * (out + out.T), dim=n)


def decompose(r) -> DecompositionReport:
    """Split R into scalar, traceless-Ricci and Weyl parts.

    R = scal/(n(n-1)) Id + 2/(n-2) (Ric0 ^ id) + W, the three parts pairwise
    orthogonal.  Needs n >= 4; below that the Weyl space is trivial and the
    formula degenerates.
    """
    mat, n = _as_mat(r)
    if n < 4:
        raise UnsupportedDimensionError(f"decomposition needs n >= 4, got {n}")
    N = mat.shape[0]
    scal = 2.0 * float(np.trace(mat))
    ric = ricci(mat)
    ric0 = ric - (scal / n) * np.eye(n)
    scalar_part = (scal / (n * (n - 1))) * np.eye(N)
    ricci_part = (2.0 / (n - 2)) * wedge_product(ric0, np.eye(n)).mat
    weyl_mat = mat - scalar_part - ricci_part
    norm = np.linalg.norm(mat)
    if norm > 1e-14:
        angle = float(np.arccos(np.clip(np.trace(mat) / (norm * np.sqrt(N)), -1, 1)))
    else:
        angle = float("nan")
    return DecompositionReport(
        dim=n,
        scal=scal,
        ricci0=ric0,
        scalar_part=scalar_part,
        ricci_part=ricci_part,
        weyl=CurvatureOperator(weyl_mat, dim=n),
        scalar_part_norm=float(np.linalg.norm(scalar_part)),
        ricci_part_norm=float(np.linalg.norm(ricci_part)),
        weyl_norm=float(np.linalg.norm(weyl_mat)),
        angle=angle,
    )


# --- sharp product ----------------------------------------------------------

def _sharp_mat(rm: np.ndarray, sm: np.ndarray, n: int) -> np.ndarray:
    """<(R#S)v, w> = -1/2 tr(ad_v R ad_w S), symmetrized in (R, S)."""
    A = structure_constants(n).ad_stack
    N = rm.shape[0]
    P = A @ rm  # P[g] = ad_g R
    U = A @ sm if sm is not rm else P
    # T[g, d] = tr(P[g] U[d])
    T = P.reshape(N, -1) @ U.transpose(0, 2, 1).reshape(N, -1).T
    return -0.25 * (T + T.T)


def sharp(r, s=None) -> SymmetricOperator:
    """Sharp product R # S (R # R when s is omitted)."""
    rm, n = _as_mat(r)
    if s is None:
        sm, m = rm, n
    else:
        sm, m = _as_mat(s)
    if m != n:
        raise ArgumentError("sharp factors live in different dimensions")
    return SymmetricOperator(_sharp_mat(rm, sm, n), dim=n)


def sharp_via_brackets(r, s=None) -> SymmetricOperator:
    """Reference route for the sharp product from raw structure constants.

    <(R#S)v, w> = 1/2 sum_{a,b} <[R b_a, S b_b], v> <[b_a, b_b], w>,
    symmetrized in (R, S).  Slower than sharp() but shares no code with it.
    """
    rm, n = _as_mat(r)
    sm = rm if s is None else _as_mat(s)[0]
    if sm.shape != rm.shape:
        raise ArgumentError("sharp factors live in different dimensions")
    C = structure_constants(n).tensor
    B1 = np.einsum("abc,ad,be->dec", C, rm, sm, optimize=True)
    M = 0.5 * np.einsum("abg,abd->gd", B1, C, optimize=True)
    return SymmetricOperator(0.5 * (M + M.T), dim=n)


def alternative(r) -> AlternativeOperator:
    """Alternative operator: symbol matrix of sectional-type diagonal entries."""
    mat, n = _as_mat(r)
    tilde = np.zeros((n, n))
    for rank, (i, j) in enumerate(wedge_pairs(n)):
        tilde[i - 1, j - 1] = tilde[j - 1, i - 1] = mat[rank, rank]
    return AlternativeOperator(tilde, dim=n)


def sharp_pure(r) -> CurvatureOperator:
    """Sharp of an operator diagonal in the wedge basis, via its symbol matrix.

    The result is again diagonal, with symbol matrix the off-diagonal part of
    the square of the input's symbol matrix.
    """
    mat, n = _as_mat(r)
    off = mat - np.diag(np.diag(mat))
    if np.max(np.abs(off), initial=0.0) >= 1e-12:
        raise PreconditionError("sharp_pure needs a diagonal operator matrix")
    tilde = alternative(mat).tilde
    sq = tilde @ tilde
    diag = np.zeros(mat.shape[0])
    for rank, (i, j) in enumerate(wedge_pairs(n)):
        diag[rank] = sq[i - 1, j - 1]
    return CurvatureOperator(np.diag(diag), dim=n)


# --- Q, potential, trilinear form -------------------------------------------

def q_map(r, s=None) -> CurvatureOperator:
    """Q(R, S) = 1/2 (RS + SR) + R # S; Q(R) = R^2 + R # R when s is omitted.

    Inputs should satisfy the first Bianchi identity; Q then does too.
    """
    rm, n = _as_mat(r)
    if s is None:
        sym = rm @ rm
        shp = _sharp_mat(rm, rm, n)
    else:
        sm, m = _as_mat(s)
        if m != n:
            raise ArgumentError("q_map arguments live in different dimensions")
        sym = 0.5 * (rm @ sm + sm @ rm)
        shp = _sharp_mat(rm, sm, n)
    return CurvatureOperator(sym + shp, dim=n)


def potential(r) -> float:
    """Cubic potential P(R) = <Q(R), R> in the Frobenius pairing."""
    mat, n = _as_mat(r)
    q = (mat @ mat + _sharp_mat(mat, mat, n)) * mat
    return float(np.sum(q))


def potential_normalized(r) -> float:
    """P(R / ||R||); rejects operators with norm below 1e-14."""
    mat, _ = _as_mat(r)
    norm = np.linalg.norm(mat)
    if norm <= 1e-14:
        raise DegenerateInputError("potential_normalized needs a nonzero operator")
    return potential(mat / norm)


def tri(r, s, t) -> float:
    """Trilinear form <Q(R,S), T>, fully symmetric in its three arguments."""
    tm, n = _as_mat(t, "third argument")
    return float(np.sum(q_map(r, s).mat * tm))


# --- angle, rotation, tensor norm -------------------------------------------

def angle_to_identity(r) -> float:
    """Angle between R and the identity operator, in [0, pi]."""
    mat, _ = _as_mat(r)
    norm = np.linalg.norm(mat)
    if norm <= 1e-14:
        raise DegenerateInputError("angle_to_identity needs a nonzero operator")
    cos = np.trace(mat) / (norm * np.sqrt(mat.shape[0]))
    return float(np.arccos(np.clip(cos, -1.0, 1.0)))


def rotate(g: np.ndarray, r) -> CurvatureOperator:
    """Rotation action (g.R)(v ^ w, x ^ y) = R(gv ^ gw, gx ^ gy)."""
    mat, n = _as_mat(r)
    ad = adjoint_rotation(g)
    if ad.shape[0] != mat.shape[0]:
        raise ArgumentError("rotation size does not match the operator")
    out = ad.T @ mat @ ad
    return CurvatureOperator(0.5 * (out + out.T), dim=n)


def tensor_norm(r) -> float:
    """Norm of R as a (0,4)-tensor: twice the Frobenius norm of the matrix."""
    mat, _ = _as_mat(r)
    return 2.0 * float(np.linalg.norm(mat))
