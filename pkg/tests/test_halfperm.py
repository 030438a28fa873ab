"""Tests for circular/linear half-permutations, cut/reassemble, and the
weighted-count bridge to the transition-matrix inverses."""

from collections import Counter

import pytest

from ncwishart.families import Family, inverse_table
from ncwishart.halfperm import (
    CircularHalfPerm,
    LinearHalfPerm,
    WeightRule,
    cut,
    enum_ncc,
    enum_ncl,
    linear_case,
    linear_insert,
    linear_remove,
    lineardecomp_check,
    make_circular,
    make_linear,
    pair_up_odd,
    reassemble,
    unfold_marked,
    weighted_count,
)
from ncwishart.perms import AnnularPerm, Perm, enum_nc, enum_snc
from ncwishart.polyc import PolyC

C = PolyC.monomial(1)
ONE = PolyC.one()


def gbar(n, k):
    if not 0 <= k <= n:
        return PolyC.zero()
    return weighted_count(enum_ncc(n, k), WeightRule.CLOSED_BLOCKS)


def pbar(n, k):
    if not 0 <= k <= n:
        return PolyC.zero()
    return weighted_count(enum_ncl(n, k), WeightRule.CLOSED_BLOCKS)


class TestFrozenCells:
    def test_smallest_cells(self):
        assert len(enum_ncc(0, 0)) == 1
        assert gbar(0, 0) == ONE
        assert len(enum_ncc(1, 0)) == 2
        assert gbar(1, 0) == ONE + C
        assert len(enum_ncc(1, 1)) == 1
        assert gbar(1, 1) == ONE

    def test_two_point_circle_one_open(self):
        cell = enum_ncc(2, 1)
        assert len(cell) == 4
        assert gbar(2, 1) == PolyC.parse("2 + 2*c")
        # two ways to open the 2-block (one per exit), and each singleton
        # of the split partition opened against the complement's 2-cycle
        labels = sorted(str(h) for h in cell)
        assert labels == ["[1,2]", "[1](2)", "[2,1]", "[2](1)"]

    def test_two_point_circle_two_open(self):
        cell = enum_ncc(2, 2)
        assert len(cell) == 1
        h = cell[0]
        assert h.opens == ((1,), (2,)) and h.num_closed == 0

    def test_linear_cells(self):
        assert pbar(1, 0) == C
        assert pbar(1, 1) == ONE
        assert pbar(2, 1) == ONE + 2 * C
        assert pbar(0, 0) == ONE

    def test_designated_variants_of_a_point(self):
        both = enum_ncc(1, 0)
        kinds = sorted(h.designated_in for h in both)
        assert kinds == ["complement", "perm"]
        exps = sorted(h.closed_weight_exponent() for h in both)
        assert exps == [0, 1]


class TestInverseTableBridge:
    """The enumeration weights reproduce the inverse transition matrices."""

    def test_circular_matches_gamma_tilde_inverse(self):
        inv = inverse_table(Family.GAMMA_TILDE, 9)
        for n in range(9):
            for k in range(n + 1):
                assert gbar(n, k) == inv.entry(n, k), (n, k)

    def test_linear_matches_pi_inverse(self):
        inv = inverse_table(Family.PI, 9)
        for n in range(9):
            for k in range(n + 1):
                assert pbar(n, k) == inv.entry(n, k), (n, k)


class TestElementInvariants:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_circular_structure(self, n):
        from ncwishart.perms import complement

        seen = set()
        for k in range(n + 1):
            for h in enum_ncc(n, k):
                assert h.k == k
                assert h.sort_key() not in seen
                seen.add(h.sort_key())
                if k == 0:
                    assert h.designated is not None
                    continue
                comp_cycles = {frozenset(c) for c in complement(h.perm).cycles()}
                assert frozenset(h.bbar) in comp_cycles
                initials = h.initial_points()
                assert list(initials) == sorted(initials)
                for block, x in zip(h.opens, initials):
                    assert set(block) & set(h.bbar) == {x}
                    assert block[0] == x
                assert h.num_closed == h.perm.num_cycles() - k
                assert h.closed_weight_exponent() == len(h.closed_blocks())

    @pytest.mark.parametrize("n", range(1, 6))
    def test_linear_collects_through_one(self, n):
        for k in range(n + 1):
            for h in enum_ncl(n, k):
                if k == 0:
                    assert h.circ.designated_in == "complement"
                    assert 1 in h.circ.designated
                    assert h.closed_weight_exponent() == h.perm.num_cycles()
                else:
                    assert 1 in h.circ.bbar

    def test_linear_zero_open_is_plain_noncrossing(self):
        for n in range(7):
            assert len(enum_ncl(n, 0)) == len(enum_nc(n))

    def test_make_round_trips(self):
        for h in enum_ncc(4, 2):
            again = make_circular(h.n, h.perm.cycles(), h.open_sets(), h.bbar)
            assert again == h
        for h in enum_ncl(4, 2):
            again = make_linear(h.n, h.perm.cycles(), h.circ.open_sets())
            assert again == h

    def test_json_shape(self):
        h = enum_ncc(2, 1)[0]
        out = h.to_json()
        assert set(out) == {"n", "cycles", "open", "designated"}
        assert out["designated"] is None
        d = enum_ncc(2, 0)[0].to_json()
        assert set(d["designated"]) == {"block", "in"}


class TestValidation:
    def test_cap_and_range_errors(self):
        with pytest.raises(ValueError, match="cap"):
            enum_ncc(13, 0)
        with pytest.raises(ValueError, match="0 <= k"):
            enum_ncc(3, 4)
        with pytest.raises(ValueError, match="0 <= k"):
            enum_ncl(3, -1)

    def test_bad_constructions(self):
        p = Perm.from_cycles(2, ((1, 2),))
        with pytest.raises(ValueError, match="complement cycle"):
            CircularHalfPerm(n=2, perm=p, opens=((1, 2),), bbar=(1, 2))
        with pytest.raises(ValueError, match="designated"):
            CircularHalfPerm(n=2, perm=p)
        with pytest.raises(ValueError, match="exclusive"):
            CircularHalfPerm(
                n=2, perm=p, opens=((1, 2),), bbar=(1,), designated=(1, 2),
                designated_in="perm",
            )
        split = Perm.identity(2)
        with pytest.raises(ValueError, match="sorted"):
            CircularHalfPerm(
                n=2, perm=split, opens=((2,), (1,)), bbar=(1, 2)
            )
        crossing = Perm.from_cycles(4, ((1, 3), (2, 4)))
        with pytest.raises(ValueError, match="non-crossing"):
            CircularHalfPerm(n=4, perm=crossing, designated=(1, 3), designated_in="perm")

    def test_linear_requires_one_in_collector(self):
        h = enum_ncc(2, 1)[-1]
        assert 1 not in h.bbar
        with pytest.raises(ValueError, match="contain 1"):
            LinearHalfPerm(h)


class TestFourWaySplit:
    """Removing the last point sorts a cell into the four recursion terms."""

    @pytest.mark.parametrize("n1", [3, 4, 5])
    def test_split_is_a_bijection(self, n1):
        for k in range(n1 + 1):
            targets = {
                1: (n1 - 1, k - 1),
                2: (n1 - 1, k),
                3: (n1 - 1, k),
                4: (n1 - 1, k + 1),
            }
            buckets = {1: [], 2: [], 3: [], 4: []}
            for h in enum_ncl(n1, k):
                case = linear_case(h)
                reduced = linear_remove(h)
                assert linear_insert(case, reduced) == h
                drop = 0 if case in (1, 2) else 1
                assert reduced.num_closed == h.num_closed - drop
                buckets[case].append(reduced)
            for case, items in buckets.items():
                tn, tk = targets[case]
                impossible = not (0 <= tk <= tn) or (k == 0 and case in (1, 2))
                want = () if impossible else enum_ncl(tn, tk)
                assert Counter(x.sort_key() for x in items) == Counter(
                    x.sort_key() for x in want
                ), (k, case)

    def test_weighted_recursions(self):
        for n in range(1, 6):
            for k in range(n + 2):
                if k == 0:
                    assert pbar(n + 1, 0) == C * pbar(n, 0) + C * pbar(n, 1)
                    assert gbar(n + 1, 0) == (ONE + C) * gbar(n, 0) + 2 * C * gbar(n, 1)
                else:
                    assert pbar(n + 1, k) == pbar(n, k - 1) + (ONE + C) * pbar(
                        n, k
                    ) + C * pbar(n, k + 1)
                    assert gbar(n + 1, k) == gbar(n, k - 1) + (ONE + C) * gbar(
                        n, k
                    ) + C * gbar(n, k + 1)


class TestOddPairing:
    """Pairing the opens of an odd cell outside-in marks one block of a
    plain non-crossing partition, and the weights match the generating
    identity."""

    @pytest.mark.parametrize("n", range(1, 8))
    def test_bijection_and_weights(self, n):
        total = PolyC.zero()
        for k in range(1, n + 1, 2):
            for h in enum_ncl(n, k):
                merged, marked = pair_up_odd(h)
                assert unfold_marked(merged, marked) == h
                assert (k - 1) // 2 + h.num_closed == merged.num_cycles() - 1
                total = total + PolyC.monomial(merged.num_cycles() - 1)
        lhs, rhs = lineardecomp_check(n)
        assert total == rhs == lhs

    def test_marked_blocks_cover_all_partitions(self):
        n = 5
        got = Counter()
        for k in range(1, n + 1, 2):
            for h in enum_ncl(n, k):
                merged, marked = pair_up_odd(h)
                got[(merged.image, marked)] += 1
        want = Counter()
        for p in enum_nc(n):
            for block in p.cycles():
                want[(p.image, tuple(sorted(block)))] += 1
        assert got == want

    @pytest.mark.parametrize("n", range(1, 11))
    def test_identity_full_range(self, n):
        lineardecomp_check(n)


class TestCutReassemble:
    @pytest.mark.parametrize(("m", "n"), [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (4, 2)])
    def test_round_trip_and_multiset(self, m, n):
        fibers = {}
        for a in enum_snc(m, n):
            h1, h2 = cut(a)
            assert h1.n == m and h2.n == n
            assert h1.k == h2.k >= 1
            hits = [s for s in range(1, h1.k + 1) if reassemble(h1, h2, s).perm == a.perm]
            assert len(hits) == 1
            fibers.setdefault((h1, h2), []).append(a)
        rebuilt = Counter()
        for (h1, h2), members in fibers.items():
            # each distinct pair of halves is cut from exactly k elements,
            # and its k reassemblies are exactly those elements
            assert len(members) == h1.k
            for s in range(1, h1.k + 1):
                rebuilt[reassemble(h1, h2, s).perm.image] += 1
        assert rebuilt == Counter(a.perm.image for a in enum_snc(m, n))

    def test_reassemblies_are_distinct_and_valid(self):
        pool = enum_ncc(3, 2)
        h1, h2 = pool[0], pool[-1]
        results = [reassemble(h1, h2, s) for s in (1, 2)]
        assert results[0].perm != results[1].perm
        for a in results:
            assert cut(a) == (h1, h2)

    def test_weighted_product_identity(self):
        for m, n in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)]:
            total = PolyC.zero()
            for k in range(1, min(m, n) + 1):
                term = PolyC.const(k) * PolyC.monomial(k)
                total = total + term * gbar(m, k) * gbar(n, k)
            assert total == weighted_count(enum_snc(m, n), WeightRule.ALL_BLOCKS)

    def test_figure_eight_cut(self):
        a = AnnularPerm(
            8,
            4,
            Perm.from_cycles(12, ((1, 2, 3, 12), (4, 9), (5, 6, 7), (8,), (10, 11))),
        )
        outer, inner = cut(a)
        assert outer.perm.cycles() == ((1, 2, 3), (4,), (5, 6, 7), (8,))
        assert outer.open_sets() == (frozenset({1, 2, 3}), frozenset({4}))
        assert set(outer.bbar) == {1, 4, 5, 8}
        assert inner.n == 4 and inner.k == 2
        assert inner.perm.cycles() == ((1,), (2, 3), (4,))
        recovered = [
            s for s in (1, 2) if reassemble(outer, inner, s).perm == a.perm
        ]
        assert len(recovered) == 1

    def test_error_cases(self):
        h1 = enum_ncc(2, 1)[0]
        h2 = enum_ncc(2, 2)[0]
        with pytest.raises(ValueError, match="open"):
            reassemble(h1, h2, 1)
        with pytest.raises(ValueError, match="s must be"):
            reassemble(h1, enum_ncc(3, 1)[0], 2)
        closed = enum_ncc(2, 0)[0]
        with pytest.raises(ValueError):
            reassemble(closed, closed, 1)
