"""Tests for the truncated Fock-space Wick product model."""

import math

import numpy as np
import pytest

from ncwishart.halfperm import make_linear
from ncwishart.wick import (
    FockVector,
    TracialAlgebra,
    all_ncl,
    annihilation,
    convolution,
    creation,
    fock_inner,
    function_algebra,
    identity_operator,
    matrix_algebra,
    open_singletons,
    operator_residual,
    p_operator,
    prepend_split_is_bijection,
    preservation,
    scalar_algebra,
    split_images,
    verify_decomposition,
    verify_inductive_step,
    verify_p_adjoint,
    verify_prepend,
    verify_product,
    verify_vacuum,
    verify_wick_adjoint,
    w_pi,
    wick,
    wick_report,
)

ALGEBRAS = [scalar_algebra(), matrix_algebra(), function_algebra()]
L = 5


def letters_for(alg, count, seed=7):
    rng = np.random.default_rng(seed)
    return [alg.random_element(rng) for _ in range(count)]


class TestAlgebra:
    def test_gram_matrices(self):
        assert np.allclose(matrix_algebra().gram, np.eye(4) / 2)
        assert np.allclose(function_algebra().gram, np.diag([1 / 2, 1 / 3, 1 / 6]))
        assert np.allclose(scalar_algebra().gram, [[1.0]])

    def test_non_tracial_state_is_rejected(self):
        a = matrix_algebra()
        bad = np.zeros(4, dtype=complex)
        bad[0] = 1.0  # the (1,1) matrix entry is not tracial
        with pytest.raises(ValueError, match="tracial"):
            TracialAlgebra("bad", a.mult, a.star_mat, bad, a.unit)

    def test_unnormalized_state_is_rejected(self):
        a = matrix_algebra()
        with pytest.raises(ValueError, match="unit to 1"):
            TracialAlgebra("bad", a.mult, a.star_mat, 2 * a.psi_vec, a.unit)

    def test_wrong_unit_is_rejected(self):
        a = matrix_algebra()
        unit = np.zeros(4, dtype=complex)
        unit[0] = 1.0
        with pytest.raises(ValueError, match="identity"):
            TracialAlgebra("bad", a.mult, a.star_mat, a.psi_vec, unit)

    def test_matrix_product_and_star(self):
        a = matrix_algebra()
        e01 = np.zeros(4, dtype=complex)
        e01[1] = 1.0
        e10 = np.zeros(4, dtype=complex)
        e10[2] = 1.0
        prod = a.multiply(e01, e10)  # E01 E10 = E00
        assert np.allclose(prod, [1, 0, 0, 0])
        assert np.allclose(a.star(e01), e10)
        assert a.psi(prod) == pytest.approx(0.5)


class TestFockSpace:
    def test_vacuum_and_words(self):
        v = FockVector.vacuum(4, L)
        assert v.degree_range() == (0, 0)
        assert v.norm() == 1.0
        a = matrix_algebra()
        x, y = letters_for(a, 2)
        w = FockVector.tensor_word([x, y], 4, L)
        assert w.degree_range() == (2, 2)
        assert np.allclose(w.segments[2], np.kron(x, y))

    def test_word_longer_than_cap_is_rejected(self):
        a = matrix_algebra()
        xs = letters_for(a, L + 1)
        with pytest.raises(ValueError, match="longer than the depth cap"):
            FockVector.tensor_word(xs, 4, L)

    def test_inner_product_matches_the_state(self):
        a = matrix_algebra()
        x, y = letters_for(a, 2)
        u = FockVector.tensor_word([x], 4, L)
        v = FockVector.tensor_word([y], 4, L)
        want = a.psi(a.multiply(a.star(y), x))
        assert fock_inner(a, u, v) == pytest.approx(want)
        # degree-2 words multiply factorwise
        u2 = FockVector.tensor_word([x, x], 4, L)
        v2 = FockVector.tensor_word([y, y], 4, L)
        assert fock_inner(a, u2, v2) == pytest.approx(want * want)


class TestPrimitiveOperators:
    def test_degree_shifts(self):
        a = matrix_algebra()
        x, y = letters_for(a, 2)
        w2 = FockVector.tensor_word([x, y], 4, L)
        vac = FockVector.vacuum(4, L)
        assert creation(a, x, L)(w2).degree_range() == (3, 3)
        assert annihilation(a, x, L)(w2).degree_range() == (1, 1)
        assert preservation(a, x, L)(w2).degree_range() == (2, 2)
        assert annihilation(a, x, L)(vac).norm() == 0.0
        assert preservation(a, x, L)(vac).norm() == 0.0

    def test_annihilation_pairs_the_first_factor(self):
        a = matrix_algebra()
        x, y = letters_for(a, 2)
        w2 = FockVector.tensor_word([x, y], 4, L)
        got = annihilation(a, x, L)(w2)
        val = a.psi(a.multiply(a.star(x), x))
        assert np.allclose(got.segments[1], val * y)

    def test_p_on_the_vacuum(self):
        a = matrix_algebra()
        (x,) = letters_for(a, 1)
        out = p_operator(a, x, L)(FockVector.vacuum(4, L))
        assert np.allclose(out.segments[0], [a.psi(x)] + [0] * 0)
        assert np.allclose(out.segments[1], x)
        assert out.degree_range() == (0, 1)

    def test_truncation_is_flagged(self):
        a = matrix_algebra()
        (x,) = letters_for(a, 1)
        top = FockVector.tensor_word([x] * L, 4, L)
        assert creation(a, x, L)(top).truncated
        w2 = FockVector.tensor_word([x, x], 4, L)
        assert not creation(a, x, L)(w2).truncated

    def test_exact_degree_bookkeeping(self):
        a = matrix_algebra()
        (x,) = letters_for(a, 1)
        p = p_operator(a, x, L)
        assert p.exact_input_degree == L - 1
        assert (p @ p).exact_input_degree == L - 2
        assert (p + p).exact_input_degree == L - 1
        assert identity_operator(4, L).exact_input_degree == L


class TestWickOperator:
    def test_single_letter_is_centered_p(self):
        a = matrix_algebra()
        (x,) = letters_for(a, 1)
        lhs = wick(a, [x], L)
        rhs = p_operator(a, x, L) - a.psi(x) * identity_operator(4, L)
        assert operator_residual(lhs, rhs) < 1e-15

    @pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: a.name)
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_vacuum_property(self, alg, n):
        chk = verify_vacuum(alg, letters_for(alg, n), L)
        assert chk.passed, str(chk)

    def test_word_exceeding_cap_is_rejected(self):
        a = matrix_algebra()
        with pytest.raises(ValueError, match="exceeds the depth cap"):
            wick(a, letters_for(a, L + 1), L)

    @pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: a.name)
    def test_adjoints(self, alg):
        xs = letters_for(alg, 3)
        assert verify_p_adjoint(alg, xs[0], L).passed
        assert verify_wick_adjoint(alg, xs[:2], L).passed
        assert verify_wick_adjoint(alg, xs[:3], L).passed


class TestDiagramCombinatorics:
    def test_ncl_counts_are_central_binomials(self):
        for n in range(1, 5):
            assert len(all_ncl(n)) == math.comb(2 * n, n)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_prepend_split_bijection(self, n):
        assert prepend_split_is_bijection(n)

    def test_split_image_counts(self):
        for n in (1, 2, 3):
            total = sum(4 if pi.k else 2 for pi in all_ncl(n))
            assert total == len(all_ncl(n + 1))

    def test_split_of_the_empty_diagram(self):
        images = split_images(make_linear(0, [], []))
        assert len(images) == 2
        assert set(images) == set(all_ncl(1))


class TestWpi:
    def test_worked_example(self):
        a = matrix_algebra()
        ds = letters_for(a, 6)
        pi = make_linear(6, [(1, 2), (3,), (4,), (5, 6)], [(1, 2), (4,)])
        scal = a.psi(ds[2]) * a.psi(a.multiply(ds[4], ds[5]))
        want = scal * wick(a, [a.multiply(ds[0], ds[1]), ds[3]], L)
        assert operator_residual(w_pi(a, pi, ds, L), want) < 1e-12

    def test_all_open_singletons_reduce_to_plain_wick(self):
        a = function_algebra()
        ds = letters_for(a, 3)
        lhs = w_pi(a, open_singletons(3), ds, L)
        assert operator_residual(lhs, wick(a, ds, L)) < 1e-15

    def test_closed_singleton_is_a_state_multiple_of_identity(self):
        a = matrix_algebra()
        (x,) = letters_for(a, 1)
        pi = make_linear(1, [(1,)], [])
        lhs = w_pi(a, pi, [x], L)
        rhs = a.psi(x) * identity_operator(4, L)
        assert operator_residual(lhs, rhs) < 1e-15

    def test_size_mismatch_is_rejected(self):
        a = matrix_algebra()
        with pytest.raises(ValueError, match="does not match"):
            w_pi(a, open_singletons(2), letters_for(a, 3), L)


class TestConvolution:
    def test_concatenation_example(self):
        pi = make_linear(5, [(1, 2), (3, 4), (5,)], [(1, 2), (5,)])
        sigma = make_linear(6, [(1, 2), (3,), (4,), (5, 6)], [(1, 2), (4,), (5, 6)])
        out = convolution(pi, sigma)
        assert len(out) == 5
        concat = out[0]
        assert {tuple(sorted(b)) for b in concat.perm.cycles()} == {
            (1, 2), (3, 4), (5,), (6, 7), (8,), (9,), (10, 11)}
        assert {frozenset(b) for b in concat.opens} == {
            frozenset(b) for b in [(1, 2), (5,), (6, 7), (9,), (10, 11)]}

    def test_two_open_pairs_merge_five_ways(self):
        five = convolution(open_singletons(2), open_singletons(2))
        shapes = [
            ({(1,), (2,), (3,), (4,)}, {(1,), (2,), (3,), (4,)}),
            ({(1,), (2, 3), (4,)}, {(1,), (2, 3), (4,)}),
            ({(1,), (2, 3), (4,)}, {(1,), (4,)}),
            ({(1, 4), (2, 3)}, {(1, 4)}),
            ({(1, 4), (2, 3)}, set()),
        ]
        got = [
            ({tuple(sorted(b)) for b in t.perm.cycles()},
             {tuple(sorted(b)) for b in t.opens})
            for t in five
        ]
        assert got == shapes

    def test_size_law_exhaustively(self):
        for m in (1, 2):
            for n in (1, 2):
                universe = set(all_ncl(m + n))
                for pi in all_ncl(m):
                    for sigma in all_ncl(n):
                        out = convolution(pi, sigma)
                        assert len(out) == 2 * min(pi.k, sigma.k) + 1
                        assert len(set(out)) == len(out)
                        assert set(out) <= universe

    def test_closed_side_gives_plain_concatenation(self):
        pi = make_linear(2, [(1, 2)], [])
        out = convolution(pi, open_singletons(2))
        assert len(out) == 1

    def test_three_against_three_open_singletons(self):
        out = convolution(open_singletons(3), open_singletons(3))
        assert len(out) == 7
        assert len(set(out)) == 7


class TestIdentities:
    @pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: a.name)
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_decomposition(self, alg, n):
        chk = verify_decomposition(alg, letters_for(alg, n), L)
        assert chk.passed, str(chk)

    @pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: a.name)
    def test_prepend_split_operator_identity(self, alg):
        xs = letters_for(alg, 3)
        diagrams = [
            open_singletons(2),
            make_linear(2, [(1, 2)], [(1, 2)]),
            make_linear(2, [(1,), (2,)], [(2,)]),
        ]
        for pi in diagrams:
            chk = verify_prepend(alg, xs[0], pi, xs[1:3], L)
            assert chk.passed, str(chk)

    @pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: a.name)
    def test_product_theorem(self, alg):
        xs = letters_for(alg, 4)
        cases = [
            (open_singletons(1), xs[:1], open_singletons(1), xs[1:2]),
            (open_singletons(2), xs[:2], open_singletons(2), xs[2:4]),
            (make_linear(2, [(1, 2)], [(1, 2)]), xs[:2],
             make_linear(2, [(1,), (2,)], [(2,)]), xs[2:4]),
            (make_linear(1, [(1,)], []), xs[:1],
             open_singletons(2), xs[1:3]),
        ]
        for pi, w1, sigma, w2 in cases:
            chk = verify_product(alg, pi, w1, sigma, w2, L)
            assert chk.passed, str(chk)

    @pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: a.name)
    def test_inductive_step(self, alg):
        xs = letters_for(alg, 4)
        assert verify_inductive_step(alg, xs[:2], xs[2:4], L).passed
        assert verify_inductive_step(alg, xs[:1], xs[1:4], L).passed

    def test_report_all_green(self):
        checks = wick_report(depth=4, seed=1)
        assert checks, "report must not be empty"
        failed = [str(c) for c in checks if not c.passed]
        assert not failed, failed
        assert all("pass" in c.to_json() for c in checks)
