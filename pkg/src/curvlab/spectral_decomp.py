"""Weyl-space bases, the Hessian-type operator at a critical point, and the
dimension bookkeeping of the invariant decompositions.

weyl_basis(n) produces an orthonormal basis of the space of Weyl operators
(trace-free Ricci, first Bianchi identity) by projecting the standard
symmetric basis and rank-revealing the span.  hessian_matrix represents
W -> Q(W0, W) on that basis; eigen_report clusters a symmetric spectrum;
orbit_tangent_dim measures rotation orbits; decomposition_dims reproduces
every dimension count of the SO(k) x SO(l) and Pin(2)-refined splittings,
including the X_k spaces cut out of Lambda^2(R^k) (x) R^k by the triple
wedge map.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .curvature_core import (
    CurvatureOperator,
    _as_mat,
    bianchi_project,
    ricci,
    wedge_product,
)
from .errors import ArgumentError, UnsupportedDimensionError
from .lie_basis import (
    sp1_basis,
    structure_constants,
    wedge_count,
    wedge_pairs,
    wedge_rank,
)

__all__ = [
    "WeylBasis",
    "SpectralReport",
    "weyl_dim",
    "x_dim",
    "weyl_basis",
    "hessian_matrix",
    "eigen_report",
    "orbit_tangent_dim",
    "triple_wedge_matrix",
    "x_space_basis",
    "DimensionTable",
    "decomposition_dims",
]


def weyl_dim(n: int) -> int:
    """Dimension of the Weyl space: (n-3)/2 * C(n+2, 3)."""
    if n < 3:
        raise UnsupportedDimensionError(f"need n >= 3, got {n}")
    return (n - 3) * math.comb(n + 2, 3) // 2


def x_dim(k: int) -> int:
    """Dimension of X_k: k C(k,2) - C(k,3) - k = k(k-2)(k+2)/3."""
    if k < 3:
        raise ArgumentError(f"need k >= 3, got {k}")
    return k * (k - 2) * (k + 2) // 3


@dataclass(frozen=True)
class WeylBasis:
    """Orthonormal basis of the Weyl operators in dimension n."""

    dim: int
    vectors: tuple[CurvatureOperator, ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def stack(self) -> np.ndarray:
        """All basis matrices as one (count, N, N) array."""
        return np.array([v.mat for v in self.vectors])


def _weyl_component(mat: np.ndarray, n: int) -> np.ndarray:
    """Weyl part of a curvature operator, without container overhead."""
    N = mat.shape[0]
    scal = 2.0 * np.trace(mat)
    ric = ricci(mat)
    ric0 = ric - (scal / n) * np.eye(n)
    ricci_part = (2.0 / (n - 2)) * wedge_product(ric0, np.eye(n)).mat
    return mat - (scal / (n * (n - 1))) * np.eye(N) - ricci_part


@functools.lru_cache(maxsize=None)
def weyl_basis(n: int) -> WeylBasis:
    """Orthonormal Weyl basis via projection of the standard symmetric basis.

    Deterministic: candidates are the E_ab in lexicographic order, projected
    onto ker(Ricci) within ker(b), then orthonormalized by a rank-revealing
    SVD whose sign is fixed per vector.
    """
    if not 5 <= n <= 12:
        raise UnsupportedDimensionError(f"weyl_basis supports 5 <= n <= 12, got {n}")
    N = wedge_count(n)
    rows = []
    for a in range(N):
        for b in range(a, N):
            e = np.zeros((N, N))
            e[a, b] = e[b, a] = 1.0
            rows.append(_weyl_component(bianchi_project(e).mat, n).ravel())
    m = np.array(rows)
    _, s, vt = np.linalg.svd(m, full_matrices=False)
    rank = int(np.sum(s > 1e-10 * s[0]))
    expected = weyl_dim(n)
    if rank != expected:
        raise RuntimeError(
            f"Weyl rank {rank} does not match the dimension formula {expected} at n={n}"
        )
    vectors = []
    for row in vt[:rank]:
        mat = row.reshape(N, N)
        mat = 0.5 * (mat + mat.T)
        flat = mat.ravel()
        lead = np.argmax(np.abs(flat))
        if flat[lead] < 0:
            mat = -mat
        vectors.append(CurvatureOperator(mat, dim=n))
    return WeylBasis(dim=n, vectors=tuple(vectors))


def hessian_matrix(w0, basis: WeylBasis) -> np.ndarray:
    """Matrix of W -> Q(W0, W) on a Weyl basis: entries <Q(W0, b_i), b_j>.

    W0 must be a unit Weyl operator of the basis dimension.
    """
    mat, n = _as_mat(w0)
    if n != basis.dim:
        raise ArgumentError("operator and basis live in different dimensions")
    if abs(np.linalg.norm(mat) - 1.0) > 1e-8:
        raise ArgumentError("hessian base point must have unit norm")
    if np.max(np.abs(ricci(mat))) > 1e-8:
        raise ArgumentError("hessian base point must be a Weyl operator")
    stack = basis.stack()
    count, N = stack.shape[0], stack.shape[1]
    ad = structure_constants(n).ad_stack
    p2 = (ad @ mat).reshape(N, -1)
    q_rows = np.empty((count, N * N))
    for idx in range(count):
        b = stack[idx]
        t = p2 @ (ad @ b).transpose(0, 2, 1).reshape(N, -1).T
        q = 0.5 * (mat @ b + b @ mat) - 0.25 * (t + t.T)
        q_rows[idx] = q.ravel()
    h = q_rows @ stack.reshape(count, -1).T
    return 0.5 * (h + h.T)


@dataclass(frozen=True)
class SpectralReport:
    """Clustered spectrum of a symmetric matrix."""

    clusters: tuple[tuple[float, int], ...]
    residual: float
    cluster_tol: float
    size: int

    def __post_init__(self):
        if sum(m for _, m in self.clusters) != self.size:
            raise ArgumentError("cluster multiplicities must sum to the matrix size")

    def multiplicity_of(self, value: float, tol: float = 1e-6) -> int:
        for val, mult in self.clusters:
            if abs(val - value) <= tol:
                return mult
        return 0

    def to_json_dict(self) -> dict:
        return {
            "clusters": [[val, mult] for val, mult in self.clusters],
            "residual": self.residual,
            "cluster_tol": self.cluster_tol,
            "size": self.size,
        }


def eigen_report(mat: np.ndarray, cluster_tol: float = 1e-8) -> SpectralReport:
    """Eigenvalues of a symmetric matrix, grouped into clusters.

    Values are scaled by the spectral radius before gap detection, so
    cluster_tol is a relative tolerance; clusters are reported as
    (mean eigenvalue, multiplicity), sorted descending.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ArgumentError("eigen_report expects a square matrix")
    if np.max(np.abs(mat - mat.T), initial=0.0) >= 1e-10:
        raise ArgumentError("eigen_report expects a symmetric matrix")
    vals, vecs = np.linalg.eigh(mat)
    vals, vecs = vals[::-1], vecs[:, ::-1]
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    scaled = vals / scale
    boundaries = [0]
    for i in range(1, len(vals)):
        if scaled[i - 1] - scaled[i] > cluster_tol:
            boundaries.append(i)
    boundaries.append(len(vals))
    clusters = []
    residual = 0.0
    for lo, hi in zip(boundaries[:-1], boundaries[1:]):
        mean = float(np.mean(vals[lo:hi]))
        clusters.append((mean, hi - lo))
        rep = vecs[:, lo]
        residual = max(residual, float(np.linalg.norm(mat @ rep - mean * rep)))
    return SpectralReport(
        clusters=tuple(clusters),
        residual=residual,
        cluster_tol=cluster_tol,
        size=len(vals),
    )


def orbit_tangent_dim(w) -> int:
    """Dimension of the rotation orbit through W: rank of {[ad_v, W]}."""
    mat, n = _as_mat(w)
    ad = structure_constants(n).ad_stack
    comms = ad @ mat - mat @ ad
    s = np.linalg.svd(comms.reshape(comms.shape[0], -1), compute_uv=False)
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.sum(s > 1e-8 * s[0]))


# --- dimension tables --------------------------------------------------------

def triple_wedge_matrix(k: int) -> np.ndarray:
    """Matrix of the map Lambda^2(R^k) (x) R^k -> Lambda^3(R^k), v^w (x) x -> v^w^x.

    Domain coordinates are (pair rank, vector index), column = rank * k + m.
    """
    if k < 3:
        raise ArgumentError(f"need k >= 3, got {k}")
    pairs = wedge_pairs(k)
    triples = {t: r for r, t in enumerate(itertools.combinations(range(1, k + 1), 3))}
    phi = np.zeros((len(triples), len(pairs) * k))
    for rank, (i, j) in enumerate(pairs):
        for m in range(1, k + 1):
            if m == i or m == j:
                continue
            if m > j:
                key, sign = (i, j, m), 1.0
            elif m < i:
                key, sign = (m, i, j), 1.0
            else:
                key, sign = (i, m, j), -1.0
            phi[triples[key], rank * k + (m - 1)] = sign
    return phi


def _kernel_basis(mat: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    _, s, vt = np.linalg.svd(mat, full_matrices=True)
    rank = int(np.sum(s > tol * s[0])) if s.size else 0
    return vt[rank:]


@functools.lru_cache(maxsize=None)
def x_space_basis(k: int) -> np.ndarray:
    """Orthonormal basis of X_k = ker(Phi) minus the embedded copy of R^k."""
    phi = triple_wedge_matrix(k)
    kernel = _kernel_basis(phi)
    # the copy of R^k inside the kernel: x -> sum_i (x ^ e_i) (x) e_i
    embed = np.zeros((k, phi.shape[1]))
    for m in range(1, k + 1):
        for i in range(1, k + 1):
            if i == m:
                continue
            rank = wedge_rank(min(m, i), max(m, i), k)
            embed[m - 1, rank * k + (i - 1)] = 1.0 if m < i else -1.0
    embed /= np.linalg.norm(embed, axis=1, keepdims=True)
    # project the kernel onto the complement of the embedding and re-extract
    proj = kernel - (kernel @ embed.T) @ embed
    _, s, vt = np.linalg.svd(proj, full_matrices=False)
    rank = int(np.sum(s > 1e-10 * s[0]))
    if rank != x_dim(k):
        raise RuntimeError(f"X_{k} rank {rank} does not match formula {x_dim(k)}")
    return vt[:rank]


def _x4_split_dims() -> tuple[int, int]:
    """Dimensions of X_4 intersected with sp(1)+- (x) R^4."""
    x4 = x_space_basis(4)
    sp = sp1_basis(4)
    out = []
    for sign in ("+", "-"):
        sub = np.zeros((12, x4.shape[1]))
        row = 0
        for name in ("i", "j", "k"):
            vec = sp[name + sign] / np.sqrt(2)
            for m in range(4):
                sub[row, :] = np.kron(vec, np.eye(4)[m])
                row += 1
        stackmat = np.vstack([x4, sub])
        s = np.linalg.svd(stackmat, compute_uv=False)
        joined = int(np.sum(s > 1e-10 * s[0]))
        out.append(x4.shape[0] + 12 - joined)
    return tuple(out)


@dataclass(frozen=True)
class DimensionTable:
    """Predicted dimensions of the invariant decomposition of the Weyl space."""

    n: int
    k: int
    l: int
    weyl_total: int
    blocks: dict
    pin_blocks: dict | None

    def block_sum(self) -> int:
        return sum(self.blocks.values())

    def pin_sum(self) -> int:
        return sum(self.pin_blocks.values()) if self.pin_blocks else 0


def decomposition_dims(n: int, k: int) -> DimensionTable:
    """Dimension table of the Weyl space under SO(k) x SO(n-k).

    The ten generic blocks always sum to dim Weyl_n; for k = 4 the finer
    splitting (self-dual/anti-self-dual forms, X_4 = X_4+ + X_4-, the
    Pin(2)-invariant pieces) is returned as well.  X-space dimensions are
    verified against the kernel rank of the triple wedge map.
    """
    l = n - k
    if not (3 <= k <= n - 3):
        raise ArgumentError(f"need 3 <= k <= n-3, got k={k}, n={n}")
    xk, xl = x_dim(k), x_dim(l)
    # closed form checked against the numeric kernel ranks
    for dim_val, kk in ((xk, k), (xl, l)):
        if x_space_basis(kk).shape[0] != dim_val:
            raise RuntimeError(f"X_{kk} dimension mismatch")
    sym0 = lambda m: m * (m + 1) // 2 - 1
    blocks = {
        "product_weyl_span": 1,
        "weyl_first": weyl_dim(k),
        "weyl_second": weyl_dim(l),
        "vector_pair": k * l,
        "traceless_sym_first": sym0(k),
        "traceless_sym_second": sym0(l),
        "traceless_sym_pair": sym0(k) * sym0(l),
        "biform_pair": math.comb(k, 2) * math.comb(l, 2),
        "x_first_vectors": xk * l,
        "x_second_vectors": xl * k,
    }
    total = weyl_dim(n)
    if sum(blocks.values()) != total:
        raise RuntimeError(f"decomposition blocks sum to {sum(blocks.values())}, "
                           f"not dim Weyl_{n} = {total}")
    pin_blocks = None
    if k == 4:
        plus, minus = _x4_split_dims()
        if (plus, minus) != (8, 8):
            raise RuntimeError(f"X_4 split is ({plus}, {minus}), expected (8, 8)")
        pin_blocks = {
            "cp2_weyl_span": 1,
            "weyl4_selfdual": 5,
            "weyl4_antiselfdual_1": 2,
            "weyl4_antiselfdual_2": 2,
            "product_weyl_span": 1,
            "weyl_second": weyl_dim(l),
            "vector_pair": 4 * l,
            "sym_pin_1": 3,
            "sym_pin_2": 6,
            "traceless_sym_second": sym0(l),
            "sym_pin_1_pair": 3 * sym0(l),
            "sym_pin_2_pair": 6 * sym0(l),
            "selfdual_biform_pair": 3 * math.comb(l, 2),
            "x4_plus_vectors": plus * l,
            "x4_minus_1_vectors": 4 * l,
            "x4_minus_2_vectors": 4 * l,
            "x_second_vectors": xl * 4,
            "antiselfdual_1_biform_pair": math.comb(l, 2),
            "antiselfdual_2_biform_pair": 2 * math.comb(l, 2),
        }
        if sum(pin_blocks.values()) != total:
            raise RuntimeError("refined decomposition does not sum to dim Weyl_n")
    return DimensionTable(
        n=n, k=k, l=l, weyl_total=total, blocks=blocks, pin_blocks=pin_blocks
    )
