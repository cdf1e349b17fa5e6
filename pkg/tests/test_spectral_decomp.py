import math

import numpy as np
import pytest

from curvlab.curvature_core import bianchi_project, decompose, identity_operator, ricci
from curvlab.errors import ArgumentError, UnsupportedDimensionError
from curvlab.model_spaces import sphere_product, theta, w_cp2
from curvlab.spectral_decomp import (
    decomposition_dims,
    eigen_report,
    hessian_matrix,
    orbit_tangent_dim,
    triple_wedge_matrix,
    weyl_basis,
    weyl_dim,
    x_dim,
    x_space_basis,
)

LADDER = (1.0, 0.5, 1.0 / 3.0, 0.0, -1.0 / 6.0, -0.5, -1.0)


def random_unit_weyl(rng, n):
    wb = weyl_basis(n)
    N = wb.stack().shape[1]
    raw = rng.standard_normal((N, N))
    w = decompose(bianchi_project(0.5 * (raw + raw.T))).weyl.mat
    return w / np.linalg.norm(w)


def unit_product_weyl(k, l):
    report = decompose(sphere_product(k, l))
    return report.weyl.mat / report.weyl_norm


class TestWeylBasis:
    @pytest.mark.parametrize("n,count", [(5, 35), (6, 84), (7, 168), (8, 300)])
    def test_counts(self, n, count):
        wb = weyl_basis(n)
        assert len(wb) == count == weyl_dim(n)

    def test_dim_formula(self):
        assert [weyl_dim(n) for n in range(5, 13)] == [35, 84, 168, 300, 495, 770, 1144, 1638]
        assert weyl_dim(3) == 0

    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_orthonormal(self, n):
        flat = weyl_basis(n).stack().reshape(weyl_dim(n), -1)
        gram = flat @ flat.T
        assert np.max(np.abs(gram - np.eye(weyl_dim(n)))) < 1e-10

    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_ricci_free(self, n):
        for v in weyl_basis(n).vectors:
            assert np.max(np.abs(ricci(v.mat))) < 1e-10

    def test_deterministic(self):
        fresh = weyl_basis.__wrapped__(6)
        assert np.array_equal(fresh.stack(), weyl_basis(6).stack())

    @pytest.mark.parametrize("n", [4, 13])
    def test_out_of_range(self, n):
        with pytest.raises(UnsupportedDimensionError):
            weyl_basis(n)


class TestHessian:
    @pytest.mark.parametrize(
        "n,mults",
        [(10, (1, 26, 78, 483, 156, 24, 2)), (11, (1, 30, 105, 768, 210, 28, 2))],
    )
    def test_cp2_clusters(self, n, mults):
        h = hessian_matrix(w_cp2(n), weyl_basis(n))
        rep = eigen_report(h)
        values = [v for v, _ in rep.clusters]
        expected = [math.sqrt(1.5) * x for x in LADDER]
        assert len(rep.clusters) == 7
        assert np.allclose(values, expected, atol=1e-8)
        assert tuple(m for _, m in rep.clusters) == mults
        assert sum(mults) == weyl_dim(n)
        assert abs(np.trace(h)) < 1e-8

    def test_eigenvalue_set_independent_of_n(self):
        reps = [
            eigen_report(hessian_matrix(w_cp2(n), weyl_basis(n))) for n in (10, 11)
        ]
        v10 = sorted(v for v, _ in reps[0].clusters)
        v11 = sorted(v for v, _ in reps[1].clusters)
        assert np.allclose(v10, v11, atol=1e-8)

    def test_base_point_is_top_eigenvector(self):
        wb = weyl_basis(10)
        w0 = w_cp2(10)
        h = hessian_matrix(w0, wb)
        c = wb.stack().reshape(len(wb), -1) @ w0.mat.ravel()
        assert np.linalg.norm(h @ c - math.sqrt(1.5) * c) < 1e-10

    @pytest.mark.parametrize("k,l", [(5, 6), (4, 7), (5, 5)])
    def test_product_weyl_eigenvector(self, k, l):
        n = k + l
        wb = weyl_basis(n)
        w0 = unit_product_weyl(k, l)
        h = hessian_matrix(w0, wb)
        c = wb.stack().reshape(len(wb), -1) @ w0.ravel()
        assert np.linalg.norm(h @ c - theta(k, l) * c) < 1e-10

    @pytest.mark.parametrize("n", [5, 6, 7, 8])
    def test_trace_vanishes(self, rng, n):
        w = random_unit_weyl(rng, n)
        h = hessian_matrix(w, weyl_basis(n))
        assert abs(np.trace(h)) < 1e-8

    def test_rejects_bad_base_points(self):
        wb = weyl_basis(5)
        with pytest.raises(ArgumentError):
            hessian_matrix(2.0 * w_cp2(5).mat, wb)
        ident = identity_operator(5)
        with pytest.raises(ArgumentError):
            hessian_matrix(ident.mat / ident.norm(), wb)
        with pytest.raises(ArgumentError):
            hessian_matrix(w_cp2(6), wb)


class TestEigenReport:
    def test_two_clusters(self):
        rep = eigen_report(np.diag([1.0, 1.0, 2.0]), cluster_tol=1e-6)
        assert rep.clusters == ((2.0, 1), (1.0, 2))
        assert rep.size == 3
        assert rep.residual < 1e-12
        assert rep.multiplicity_of(1.0) == 2
        assert rep.multiplicity_of(3.0) == 0

    def test_zero_matrix(self):
        rep = eigen_report(np.zeros((4, 4)))
        assert rep.clusters == ((0.0, 4),)

    def test_random_symmetric(self, rng):
        for _ in range(20):
            m = rng.standard_normal((8, 8))
            rep = eigen_report(0.5 * (m + m.T))
            values = [v for v, _ in rep.clusters]
            assert values == sorted(values, reverse=True)
            assert sum(mult for _, mult in rep.clusters) == 8
            assert rep.residual < 1e-8

    def test_rejects_bad_input(self):
        with pytest.raises(ArgumentError):
            eigen_report(np.array([[0.0, 1.0], [0.0, 0.0]]))
        with pytest.raises(ArgumentError):
            eigen_report(np.zeros((2, 3)))

    def test_cluster_projectors(self):
        h = hessian_matrix(w_cp2(10), weyl_basis(10))
        vals, vecs = np.linalg.eigh(h)
        order = np.argsort(vals)[::-1]
        vecs = vecs[:, order]
        projectors, pos = [], 0
        for _, mult in eigen_report(h).clusters:
            block = vecs[:, pos : pos + mult]
            projectors.append(block @ block.T)
            pos += mult
        for i, p in enumerate(projectors):
            assert np.max(np.abs(p @ p - p)) < 1e-8
            for q in projectors[i + 1 :]:
                assert np.max(np.abs(p @ q)) < 1e-8

    def test_json_dict(self):
        rep = eigen_report(np.eye(2))
        data = rep.to_json_dict()
        assert data["clusters"] == [[1.0, 2]]
        assert data["size"] == 2


class TestOrbitTangent:
    def test_identity_is_fixed(self):
        assert orbit_tangent_dim(identity_operator(7)) == 0

    def test_cp2_weyl_orbit(self):
        assert orbit_tangent_dim(w_cp2(11)) == 30

    @pytest.mark.parametrize("k,l", [(2, 3), (4, 6), (4, 7), (5, 5), (5, 6)])
    def test_product_weyl_orbit(self, k, l):
        assert orbit_tangent_dim(unit_product_weyl(k, l)) == k * l


class TestDimensionTables:
    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_x_space(self, k):
        phi = triple_wedge_matrix(k)
        assert np.linalg.matrix_rank(phi) == math.comb(k, 3)
        basis = x_space_basis(k)
        assert basis.shape[0] == x_dim(k) == k * math.comb(k, 2) - math.comb(k, 3) - k
        assert np.max(np.abs(phi @ basis.T)) < 1e-10

    def test_x_dim_values(self):
        assert [x_dim(k) for k in (3, 4, 5, 6, 7)] == [5, 16, 35, 64, 105]
        # appendix form for k = n - 1
        for n in range(4, 11):
            assert x_dim(n - 1) == (n + 1) * (n - 1) * (n - 3) // 3

    @pytest.mark.parametrize("n,k", [(11, 4), (11, 5), (10, 4), (10, 5), (6, 3), (12, 4)])
    def test_blocks_sum(self, n, k):
        table = decomposition_dims(n, k)
        assert table.block_sum() == table.weyl_total == weyl_dim(n)

    def test_pin_refinement(self):
        table = decomposition_dims(11, 4)
        assert table.pin_blocks is not None
        assert len(table.pin_blocks) == 19
        assert table.pin_sum() == 1144
        l = table.l
        assert table.pin_blocks["x4_plus_vectors"] == 8 * l
        assert (
            table.pin_blocks["x4_minus_1_vectors"]
            + table.pin_blocks["x4_minus_2_vectors"]
            == 8 * l
        )
        assert decomposition_dims(11, 5).pin_blocks is None

    def test_rejects_thin_factors(self):
        with pytest.raises(ArgumentError):
            decomposition_dims(11, 2)
        with pytest.raises(ArgumentError):
            decomposition_dims(11, 9)
        with pytest.raises(ArgumentError):
            x_dim(2)
