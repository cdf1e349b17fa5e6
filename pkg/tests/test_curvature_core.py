import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvlab.curvature_core import (
    AlternativeOperator,
    CurvatureOperator,
    SymmetricOperator,
    alternative,
    angle_to_identity,
    bianchi_project,
    bianchi_residual,
    decompose,
    identity_operator,
    potential,
    potential_normalized,
    q_map,
    ricci,
    rotate,
    scalar,
    sharp,
    sharp_pure,
    sharp_via_brackets,
    tensor_norm,
    tri,
    wedge_product,
)
from curvlab.errors import (
    ArgumentError,
    DegenerateInputError,
    PreconditionError,
    UnsupportedDimensionError,
)
from curvlab.lie_basis import adjoint_rotation, sp1_basis, wedge_count, wedge_rank

from conftest import random_orthogonal


def random_curvature(rng, n):
    s = rng.standard_normal((wedge_count(n),) * 2)
    return bianchi_project(0.5 * (s + s.T)).mat


def lambda4_generator(n, quad=(1, 2, 3, 4)):
    i, j, k, l = quad
    N = wedge_count(n)
    g = np.zeros((N, N))
    for (a, b), (c, d), s in (
        ((i, j), (k, l), 1.0),
        ((i, k), (j, l), -1.0),
        ((i, l), (j, k), 1.0),
    ):
        g[wedge_rank(a, b, n), wedge_rank(c, d, n)] = s
        g[wedge_rank(c, d, n), wedge_rank(a, b, n)] = s
    return g


class TestContainers:
    def test_identity_is_valid(self):
        op = identity_operator(5)
        assert op.dim == 5 and op.N == 10
        assert not op.mat.flags.writeable

    def test_rejects_asymmetric(self):
        m = np.eye(6)
        m[0, 1] = 1e-6
        with pytest.raises(ArgumentError):
            SymmetricOperator(m)

    def test_rejects_bianchi_violation(self):
        g = lambda4_generator(4)
        SymmetricOperator(g)  # fine without the Bianchi constraint
        with pytest.raises(ArgumentError):
            CurvatureOperator(g)

    def test_alternative_validation(self):
        with pytest.raises(ArgumentError):
            AlternativeOperator(np.eye(4))  # nonzero diagonal

    def test_csv_round_trip(self, rng, tmp_path):
        op = CurvatureOperator(random_curvature(rng, 5))
        path = tmp_path / "op.csv"
        op.to_csv(path)
        back = CurvatureOperator.from_csv(path)
        assert back.dim == 5
        assert np.max(np.abs(back.mat - op.mat)) <= 1e-15 * np.max(np.abs(op.mat))

    def test_json_round_trip(self, rng, tmp_path):
        op = CurvatureOperator(random_curvature(rng, 4))
        path = tmp_path / "op.json"
        op.to_json(path)
        payload = json.loads(path.read_text())
        assert payload["dim"] == 4 and payload["basis"] == "lex-wedge"
        back = CurvatureOperator.from_json(path)
        assert np.array_equal(back.mat, op.mat)

    def test_json_rejects_unknown_basis(self):
        with pytest.raises(ArgumentError):
            SymmetricOperator.from_json_dict({"dim": 4, "basis": "what", "mat": []})


class TestBianchi:
    def test_identity_fixed(self):
        for n in (4, 5, 6):
            ident = np.eye(wedge_count(n))
            assert np.array_equal(bianchi_project(ident).mat, ident)

    def test_four_form_generator_killed(self):
        for n in (4, 5, 7):
            g = lambda4_generator(n)
            assert np.max(np.abs(bianchi_project(g).mat)) < 1e-14
            assert abs(bianchi_residual(g) - np.sqrt(6)) < 1e-12

    @settings(max_examples=20, deadline=None)
    @given(st.integers(4, 7), st.integers(0, 2**32 - 1))
    def test_idempotent(self, n, seed):
        rng = np.random.default_rng(seed)
        s = rng.standard_normal((wedge_count(n),) * 2)
        once = bianchi_project(0.5 * (s + s.T)).mat
        assert np.max(np.abs(bianchi_project(once).mat - once)) < 1e-10

    def test_kernel_dimension(self, rng):
        # project a spanning set of S^2(wedge) and count the numerical rank
        n = 5
        N = wedge_count(n)
        images = []
        for a in range(N):
            for b in range(a, N):
                e = np.zeros((N, N))
                e[a, b] = e[b, a] = 1.0
                images.append(bianchi_project(e).mat.ravel())
        rank = np.linalg.matrix_rank(np.array(images), tol=1e-8)
        assert rank == n * n * (n * n - 1) // 12 == 50

    def test_projection_is_orthogonal(self, rng):
        n = 5
        s = rng.standard_normal((wedge_count(n),) * 2)
        s = 0.5 * (s + s.T)
        p = bianchi_project(s).mat
        assert abs(np.sum((s - p) * p)) < 1e-10


class TestRicciScalar:
    def test_identity(self):
        for n in (4, 5, 7):
            assert np.allclose(ricci(identity_operator(n)), (n - 1) * np.eye(n))
            assert abs(scalar(identity_operator(n)) - n * (n - 1)) < 1e-12

    def test_trace_relation(self, rng):
        r = random_curvature(rng, 6)
        assert abs(np.trace(ricci(r)) - scalar(r)) < 1e-10

    def test_ricci_of_wedge_with_id(self, rng):
        for n in (4, 6):
            a = rng.standard_normal((n, n))
            a = 0.5 * (a + a.T)
            got = ricci(wedge_product(a, np.eye(n)))
            want = 0.5 * ((n - 2) * a + np.trace(a) * np.eye(n))
            assert np.max(np.abs(got - want)) < 1e-12


class TestWedgeProduct:
    def test_id_wedge_id(self):
        for n in (4, 5):
            assert np.allclose(
                wedge_product(np.eye(n), np.eye(n)).mat, np.eye(wedge_count(n))
            )

    def test_commutative_and_bianchi(self, rng):
        n = 5
        a, b = rng.standard_normal((2, n, n))
        a, b = 0.5 * (a + a.T), 0.5 * (b + b.T)
        ab = wedge_product(a, b).mat
        assert np.max(np.abs(ab - wedge_product(b, a).mat)) < 1e-12
        assert bianchi_residual(ab) < 1e-10

    def test_split_signature_block_structure(self):
        # A = diag(1,1,-1,-1): in the sp(1)+ x sp(1)- basis of so(4), A ^ id
        # is purely off-diagonal ((0, B), (B^T, 0)); nonzero B means
        # non-Einstein by the four-dimensional block criterion
        a = np.diag([1.0, 1.0, -1.0, -1.0])
        w = wedge_product(a, np.eye(4)).mat
        sp = sp1_basis(4)
        basis = np.array([sp[x + s] / np.sqrt(2) for s in "+-" for x in "ijk"])
        blocks = basis @ w @ basis.T
        assert np.max(np.abs(blocks[:3, :3])) < 1e-14
        assert np.max(np.abs(blocks[3:, 3:])) < 1e-14
        assert np.allclose(blocks[:3, 3:], np.diag([1.0, 0.0, 0.0]))
        assert np.max(np.abs(ricci(w) - a)) < 1e-14  # visibly non-Einstein

    def test_rejects_asymmetric_factor(self):
        with pytest.raises(ArgumentError):
            wedge_product(np.triu(np.ones((4, 4))), np.eye(4))


class TestSharp:
    def test_identity_sharp_identity(self):
        for n in (4, 5, 6, 8):
            ident = np.eye(wedge_count(n))
            assert np.max(np.abs(sharp(ident).mat - (n - 2) * ident)) < 1e-12

    def test_routes_agree(self, rng):
        for n in (4, 5, 6, 7):
            r = random_curvature(rng, n)
            s = random_curvature(rng, n)
            assert np.max(np.abs(sharp(r).mat - sharp_via_brackets(r).mat)) < 1e-10
            assert (
                np.max(np.abs(sharp(r, s).mat - sharp_via_brackets(r, s).mat)) < 1e-10
            )

    def test_bilinear_symmetric(self, rng):
        n = 5
        r, s = random_curvature(rng, n), random_curvature(rng, n)
        assert np.max(np.abs(sharp(r, s).mat - sharp(s, r).mat)) < 1e-12
        lhs = sharp(r + 2 * s, r + 2 * s).mat
        rhs = sharp(r).mat + 4 * sharp(r, s).mat + 4 * sharp(s).mat
        assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_bw_identity(self, rng):
        # R + R # Id = (n-1) R_I + (n-2)/2 R_ric for random curvature operators
        for n in (4, 5, 6, 7, 8):
            for _ in range(5):
                r = random_curvature(rng, n)
                d = decompose(r)
                lhs = r + sharp(r, np.eye(r.shape[0])).mat
                rhs = (n - 1) * d.scalar_part + 0.5 * (n - 2) * d.ricci_part
                assert np.max(np.abs(lhs - rhs)) < 1e-9

    def test_weyl_sharp_id(self, rng):
        for n in (4, 5, 6):
            w = decompose(random_curvature(rng, n)).weyl.mat
            assert np.max(np.abs(w + sharp(w, np.eye(w.shape[0])).mat)) < 1e-9

    def test_equivariance(self, rng):
        n = 5
        r = random_curvature(rng, n)
        g = random_orthogonal(rng, n)
        lhs = sharp(rotate(g, r).mat).mat
        ad = adjoint_rotation(g)
        assert np.max(np.abs(lhs - ad.T @ sharp(r).mat @ ad)) < 1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(ArgumentError):
            sharp(np.eye(6), np.eye(10))


class TestSharpPure:
    def test_matches_general_sharp(self, rng):
        for n in (4, 5, 6):
            d = np.diag(rng.standard_normal(wedge_count(n)))
            assert np.max(np.abs(sharp_pure(d).mat - sharp(d).mat)) < 1e-10

    def test_identity(self):
        n = 6
        out = sharp_pure(np.eye(wedge_count(n)))
        assert np.allclose(out.mat, (n - 2) * np.eye(wedge_count(n)))

    def test_symbol_square_rule(self, rng):
        n = 5
        d = np.diag(rng.standard_normal(wedge_count(n)))
        tilde = alternative(d).tilde
        sq = tilde @ tilde
        got = alternative(sharp_pure(d).mat).tilde
        assert np.max(np.abs(got - (sq - np.diag(np.diag(sq))))) < 1e-12

    def test_rejects_off_diagonal(self, rng):
        with pytest.raises(PreconditionError):
            sharp_pure(random_curvature(rng, 5) + np.eye(10))

    def test_weyl_detection_by_column_sums(self, rng):
        # for pure operators the Ricci diagonal equals the symbol column sums,
        # so zero column sums and zero Ricci detect the same thing
        n = 5
        d = np.diag(rng.standard_normal(wedge_count(n)))
        ric = ricci(d)
        assert np.max(np.abs(ric - np.diag(np.diag(ric)))) < 1e-12
        assert np.max(np.abs(np.diag(ric) - alternative(d).column_sums())) < 1e-12
        # a pure operator with vanishing symbol column sums is Weyl
        coeffs = {(1, 2): 1.0, (3, 4): 1.0, (1, 3): 1.0, (2, 4): 1.0,
                  (1, 4): -2.0, (2, 3): -2.0}
        w = np.diag([coeffs[p] for p in ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))])
        assert np.max(np.abs(alternative(w).column_sums())) == 0
        assert np.max(np.abs(ricci(w))) < 1e-12


class TestQAndPotential:
    def test_potential_of_identity(self):
        for n in (4, 5, 9):
            ident = np.eye(wedge_count(n))
            assert abs(potential(ident) - (n - 1) * wedge_count(n)) < 1e-10

    @settings(max_examples=15, deadline=None)
    @given(st.integers(4, 6), st.floats(-3, 3), st.integers(0, 2**32 - 1))
    def test_cubic_scaling(self, n, c, seed):
        r = random_curvature(np.random.default_rng(seed), n)
        assert abs(potential(c * r) - c**3 * potential(r)) < 1e-8 * (1 + abs(c)) ** 3

    def test_q_of_weyl_is_weyl(self, rng):
        for n in (4, 5, 6):
            w1 = decompose(random_curvature(rng, n)).weyl.mat
            w2 = decompose(random_curvature(rng, n)).weyl.mat
            assert np.max(np.abs(ricci(q_map(w1, w2)))) < 1e-10

    def test_polarization(self, rng):
        n = 5
        r, s = random_curvature(rng, n), random_curvature(rng, n)
        lhs = q_map(r + s).mat
        rhs = q_map(r).mat + 2 * q_map(r, s).mat + q_map(s).mat
        assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_tri_symmetric(self, rng):
        n = 5
        ops = [random_curvature(rng, n) for _ in range(3)]
        vals = [tri(*perm) for perm in itertools.permutations(ops)]
        assert max(vals) - min(vals) < 1e-10
        assert abs(tri(ops[0], ops[0], ops[0]) - potential(ops[0])) < 1e-12

    def test_additive_split_for_einstein_plus_weyl(self, rng):
        # P(c Id + W) = P(c Id) + P(W) for Weyl W
        n = 6
        w = decompose(random_curvature(rng, n)).weyl.mat
        c = 0.7
        ident = np.eye(w.shape[0])
        assert abs(
            potential(c * ident + w) - potential(c * ident) - potential(w)
        ) < 1e-9

    def test_potential_normalized(self, rng):
        r = random_curvature(rng, 5)
        assert abs(
            potential_normalized(r) - potential(r) / np.linalg.norm(r) ** 3
        ) < 1e-10
        with pytest.raises(DegenerateInputError):
            potential_normalized(np.zeros((10, 10)))


class TestAngleRotateNorm:
    def test_angle_of_identity(self):
        # arccos near 1 is ill-conditioned, so allow square-root noise
        assert angle_to_identity(np.eye(10)) < 1e-6

    def test_angle_scale_invariant(self, rng):
        r = random_curvature(rng, 5)
        assert abs(angle_to_identity(r) - angle_to_identity(3.7 * r)) < 1e-12
        with pytest.raises(DegenerateInputError):
            angle_to_identity(np.zeros((10, 10)))

    def test_rotation_is_isometric_and_equivariant(self, rng):
        n = 5
        r = random_curvature(rng, n)
        g = random_orthogonal(rng, n)
        gr = rotate(g, r)
        assert abs(gr.norm() - np.linalg.norm(r)) < 1e-10
        assert abs(potential(gr) - potential(r)) < 1e-9
        assert abs(angle_to_identity(gr) - angle_to_identity(r)) < 1e-10
        ad = adjoint_rotation(g)
        assert np.max(np.abs(q_map(gr.mat).mat - ad.T @ q_map(r).mat @ ad)) < 1e-9

    def test_rotate_by_identity(self, rng):
        r = random_curvature(rng, 4)
        assert np.max(np.abs(rotate(np.eye(4), r).mat - r)) < 1e-14

    def test_rotate_rejects_non_orthogonal(self, rng):
        with pytest.raises(ArgumentError):
            rotate(np.ones((5, 5)), random_curvature(rng, 5))

    def test_tensor_norm(self, rng):
        assert abs(tensor_norm(np.eye(6)) - 2 * np.sqrt(6)) < 1e-14
        r = random_curvature(rng, 5)
        assert abs(tensor_norm(r) - 2 * np.linalg.norm(r)) < 1e-14

    def test_tensor_norm_against_four_index_sum(self, rng):
        # brute-force (0,4)-tensor norm: Rm(i,j,k,l) = <R(e_i^e_j), e_k^e_l>
        # summed over all four indices with antisymmetric extension
        n = 4
        r = random_curvature(rng, n)
        total = 0.0
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                si = 1.0 if i < j else -1.0
                a = wedge_rank(min(i, j), max(i, j), n)
                for k in range(1, n + 1):
                    for l in range(1, n + 1):
                        if k == l:
                            continue
                        sk = 1.0 if k < l else -1.0
                        b = wedge_rank(min(k, l), max(k, l), n)
                        total += (si * sk * r[a, b]) ** 2
        assert abs(np.sqrt(total) - tensor_norm(r)) < 1e-10


class TestDecompose:
    def test_identity(self):
        d = decompose(identity_operator(5))
        assert abs(d.scal - 20) < 1e-12
        assert np.max(np.abs(d.ricci0)) < 1e-12
        assert d.weyl_norm < 1e-12
        assert d.angle < 1e-6

    def test_reconstruction_and_orthogonality(self, rng):
        for n in (4, 5, 7):
            r = random_curvature(rng, n)
            d = decompose(r)
            recon = d.scalar_part + d.ricci_part + d.weyl.mat
            assert np.max(np.abs(recon - r)) < 1e-10
            assert abs(np.sum(d.scalar_part * d.ricci_part)) < 1e-10
            assert abs(np.sum(d.scalar_part * d.weyl.mat)) < 1e-10
            assert abs(np.sum(d.ricci_part * d.weyl.mat)) < 1e-10
            assert np.max(np.abs(ricci(d.weyl))) < 1e-10
            assert abs(np.trace(d.ricci0)) < 1e-10

    def test_norm_pythagoras(self, rng):
        r = random_curvature(rng, 6)
        d = decompose(r)
        assert abs(
            d.scalar_part_norm**2
            + d.ricci_part_norm**2
            + d.weyl_norm**2
            - np.linalg.norm(r) ** 2
        ) < 1e-9

    def test_rejects_small_dimension(self):
        with pytest.raises(UnsupportedDimensionError):
            decompose(np.eye(3))

    def test_equivariant(self, rng):
        n = 6
        r = random_curvature(rng, n)
        g = random_orthogonal(rng, n)
        d1 = decompose(rotate(g, r))
        d0 = decompose(r)
        assert abs(d1.scal - d0.scal) < 1e-9
        assert abs(d1.weyl_norm - d0.weyl_norm) < 1e-9
        assert np.max(np.abs(d1.ricci0 - g.T @ d0.ricci0 @ g)) < 1e-9
