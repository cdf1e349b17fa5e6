"""Constructors for the named curvature operators used throughout the package.

Round spheres, products of round spheres, complex projective spaces, the unit
Weyl operator of CP^2 embedded in higher dimensions, the Einstein family
lambda/(n-1) Id + cos(phi) W + sin(phi) W', and the two critical operators
obtained by normalizing these families.  Everything returns a validated
CurvatureOperator in the lexicographic wedge basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curvature_core import (
    CurvatureOperator,
    decompose,
    ricci,
    _as_mat,
)
from .errors import ArgumentError, UnsupportedDimensionError
from .lie_basis import sp1_basis, wedge_count, wedge_pairs, wedge_rank

__all__ = [
    "LAMBDA_CRIT",
    "sphere",
    "sphere_product",
    "cpn",
    "w_cp2",
    "r_lambda",
    "crit_cp2",
    "crit_sym",
    "theta",
    "theta_threshold",
    "Interval",
    "intermediate_range",
    "ModelSpec",
]

#: potential of the embedded CP^2 Weyl operator; the upper end of every
#: intermediate parameter range
LAMBDA_CRIT = math.sqrt(1.5)


def sphere(n: int) -> CurvatureOperator:
    """Curvature operator of the round unit sphere: the identity."""
    if n < 3:
        raise UnsupportedDimensionError(f"need n >= 3, got {n}")
    return CurvatureOperator(np.eye(wedge_count(n)), dim=n)


def sphere_product(k: int, l: int) -> CurvatureOperator:
    """Curvature operator of S^k x S^l with both factors round and Einstein.

    In the wedge basis the operator is diagonal: 1 on so(k), (k-1)/(l-1) on
    so(l), 0 on the mixed block.  Einstein with constant k-1.
    """
    if k < 2 or l < 2:
        raise ArgumentError(f"both factors need dimension >= 2, got ({k}, {l})")
    n = k + l
    diag = np.zeros(wedge_count(n))
    ratio = (k - 1) / (l - 1)
    for rank, (i, j) in enumerate(wedge_pairs(n)):
        if j <= k:
            diag[rank] = 1.0
        elif i > k:
            diag[rank] = ratio
    return CurvatureOperator(np.diag(diag), dim=n)


def cpn(n_half: int) -> CurvatureOperator:
    """Curvature operator of CP^{n_half} (real dimension 2 n_half), Fubini-Study.

    Coordinates: e_k is the k-th complex direction and e_{n_half+k} its image
    under the complex structure.  The operator is assembled from its action on
    the four kinds of basis bivectors (two real directions, real/imaginary of
    different lines, two imaginary directions, and the Kaehler 2-planes).
    """
    if n_half < 1:
        raise ArgumentError(f"complex dimension must be >= 1, got {n_half}")
    m = n_half
    n = 2 * m
    N = wedge_count(n)
    mat = np.zeros((N, N))
    for k in range(1, m + 1):
        for l in range(k + 1, m + 1):
            both_real = wedge_rank(k, l, n)
            both_imag = wedge_rank(m + k, m + l, n)
            mat[both_real, both_real] += 1.0
            mat[both_imag, both_real] += 1.0
            mat[both_imag, both_imag] += 1.0
            mat[both_real, both_imag] += 1.0
        for l in range(1, m + 1):
            if l == k:
                continue
            col = wedge_rank(k, m + l, n)
            mat[col, col] += 1.0
            mat[wedge_rank(l, m + k, n), col] += 1.0
        kaehler = wedge_rank(k, m + k, n)
        mat[kaehler, kaehler] += 4.0
        for l in range(1, m + 1):
            if l != k:
                mat[wedge_rank(l, m + l, n), kaehler] += 2.0
    return CurvatureOperator(mat, dim=n)


def w_cp2(n: int) -> CurvatureOperator:
    """Unit Weyl operator of CP^2, zero-padded onto the first four coordinates.

    W = (2 P_i - P_j - P_k)/sqrt(6) where P_x projects onto the unit sp(1)-
    generator x/sqrt(2); an eigenvector of Q with Q(W) = sqrt(3/2) W.
    """
    if n < 4:
        raise UnsupportedDimensionError(f"need n >= 4, got {n}")
    sp = sp1_basis(n)
    proj = {x: 0.5 * np.outer(sp[x + "-"], sp[x + "-"]) for x in "ijk"}
    mat = (2.0 * proj["i"] - proj["j"] - proj["k"]) / math.sqrt(6.0)
    return CurvatureOperator(mat, dim=n)


def r_lambda(
    lam: float, n: int, phi: float = 0.0, w_extra=None
) -> CurvatureOperator:
    """Einstein operator lambda/(n-1) Id + cos(phi) W_CP2 (+ sin(phi) W_extra).

    W_extra, when given, must be a unit Weyl operator orthogonal to W_CP2; it
    tilts the Weyl part inside the sphere of radius one without changing the
    Einstein part.
    """
    if not lam > 0:
        raise ArgumentError(f"lambda must be positive, got {lam}")
    if not 0 <= phi <= math.pi / 2:
        raise ArgumentError(f"phi must lie in [0, pi/2], got {phi}")
    base = w_cp2(n)
    mat = (lam / (n - 1)) * np.eye(base.N) + math.cos(phi) * base.mat
    if w_extra is not None:
        extra, m = _as_mat(w_extra, "w_extra")
        if m != n:
            raise ArgumentError("w_extra lives in a different dimension")
        if abs(np.linalg.norm(extra) - 1.0) > 1e-10:
            raise ArgumentError("w_extra must have unit norm")
        if abs(np.sum(extra * base.mat)) > 1e-10:
            raise ArgumentError("w_extra must be orthogonal to the CP^2 Weyl operator")
        if np.max(np.abs(ricci(extra))) > 1e-10:
            raise ArgumentError("w_extra must be a Weyl operator")
        mat = mat + math.sin(phi) * extra
    return CurvatureOperator(mat, dim=n)


def crit_cp2(n: int) -> CurvatureOperator:
    """The critical member of the CP^2 family: sqrt(3/2)/(n-1) Id + W_CP2."""
    return r_lambda(LAMBDA_CRIT, n, 0.0)


def crit_sym(n: int) -> CurvatureOperator:
    """Sphere product S^k x S^l, k = ceil(n/2), scaled by its Weyl norm.

    After the scaling the Weyl part has unit norm and the Einstein constant
    equals theta(k, l).
    """
    if n < 4:
        raise UnsupportedDimensionError(f"need n >= 4, got {n}")
    k = (n + 1) // 2
    base = sphere_product(k, n - k)
    weyl_norm = decompose(base).weyl_norm
    return CurvatureOperator(base.mat / weyl_norm, dim=n)


def theta(k: int, l: int) -> float:
    """Normalized potential of the Weyl part of a sphere product:
    sqrt(2 (k-1)/k * (l-1)/l * (n-1)/(n-2)) with n = k + l."""
    if k < 2 or l < 2:
        raise ArgumentError(f"both factors need dimension >= 2, got ({k}, {l})")
    n = k + l
    return math.sqrt(2.0 * (k - 1) / k * (l - 1) / l * (n - 1) / (n - 2))


def theta_threshold(n: int) -> float:
    """theta for the balanced sphere product in dimension n.

    Even n: sqrt(2(n-1)(n-2))/n; odd n: sqrt(2 (n-1)(n-3)/((n+1)(n-2))).
    Coincides with theta(ceil(n/2), floor(n/2)) and with the Einstein
    constant of crit_sym(n) for both parities.
    """
    if n < 4:
        raise UnsupportedDimensionError(f"need n >= 4, got {n}")
    if n % 2 == 0:
        return math.sqrt(2.0 * (n - 1) * (n - 2)) / n
    return math.sqrt(2.0 * (n - 1) * (n - 3) / ((n + 1) * (n - 2)))


@dataclass(frozen=True)
class Interval:
    """Closed real interval; empty when lo > hi."""

    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def intermediate_range(n: int) -> Interval:
    """Einstein constants between the sphere-product and CP^2 critical values.

    [theta_threshold(n), sqrt(3/2)]; empty from n = 12 on, where the
    sphere-product threshold overtakes the CP^2 one.
    """
    if n < 5:
        raise UnsupportedDimensionError(f"need n >= 5, got {n}")
    return Interval(theta_threshold(n), LAMBDA_CRIT)


_MODEL_KINDS = {
    "Sphere",
    "SphereProduct",
    "CPn",
    "WCP2Embedded",
    "RLambda",
    "CritSym",
    "CritCP2",
}


@dataclass(frozen=True)
class ModelSpec:
    """Serializable recipe for a model operator, as consumed by the CLI."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _MODEL_KINDS:
            raise ArgumentError(
                f"unknown model kind {self.kind!r}; expected one of {sorted(_MODEL_KINDS)}"
            )
        p = self.params
        if self.kind == "SphereProduct":
            if "k" not in p or "l" not in p:
                raise ArgumentError("SphereProduct needs parameters k and l")
            if "n" in p and p["n"] != p["k"] + p["l"]:
                raise ArgumentError("SphereProduct needs k + l = n")
        elif self.kind == "RLambda":
            if "lambda" not in p or "n" not in p:
                raise ArgumentError("RLambda needs parameters lambda and n")
            if not p["lambda"] > 0:
                raise ArgumentError("RLambda needs lambda > 0")
            if not 0 <= p.get("phi", 0.0) <= math.pi / 2:
                raise ArgumentError("RLambda needs 0 <= phi <= pi/2")
        elif "n" not in p:
            raise ArgumentError(f"{self.kind} needs parameter n")

    def build(self) -> CurvatureOperator:
        p = self.params
        if self.kind == "Sphere":
            return sphere(p["n"])
        if self.kind == "SphereProduct":
            return sphere_product(p["k"], p["l"])
        if self.kind == "CPn":
            return cpn(p["n"])
        if self.kind == "WCP2Embedded":
            return w_cp2(p["n"])
        if self.kind == "RLambda":
            return r_lambda(p["lambda"], p["n"], p.get("phi", 0.0))
        if self.kind == "CritSym":
            return crit_sym(p["n"])
        return crit_cp2(p["n"])

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_json_dict(cls, payload: dict) -> "ModelSpec":
        payload = dict(payload)
        try:
            kind = payload.pop("kind")
        except KeyError:
            raise ArgumentError("model JSON needs a 'kind' field") from None
        return cls(kind, payload)
