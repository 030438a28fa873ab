"""Tests for the two-color dot encoding: binomial cell counts, the
bijection with circular half-permutations, and the dot-level one-point
recursion maps."""

from collections import Counter
from math import comb

import pytest

from ncwishart.dots import (
    BLACK,
    WHITE,
    DotStructure,
    circular_insert,
    circular_remove,
    dot_decode,
    dot_encode,
    enum_dots,
    recursion_class,
)
from ncwishart.families import Family, inverse_table
from ncwishart.halfperm import CircularHalfPerm, enum_ncc
from ncwishart.perms import Perm
from ncwishart.polyc import PolyC

C = PolyC.c()
ONE = PolyC.one()


def gbar(n, k):
    if not 0 <= k <= n:
        return PolyC.zero()
    return inverse_table(Family.GAMMA_TILDE, n + 1).entry(n, k)


class TestFrozenStructures:
    def test_empty_diagram(self):
        d = DotStructure(0, (), ())
        assert (d.j, d.k) == (0, 0)
        assert dot_encode(dot_decode(d)) == d
        assert enum_dots(0, 0, 0) == (d,)

    def test_single_point_cells(self):
        comp, perm = sorted(enum_ncc(1, 0), key=lambda h: h.designated_in)
        assert comp.designated_in == "complement"
        assert dot_encode(comp) == DotStructure(1, (WHITE,), (BLACK,))
        assert perm.designated_in == "perm"
        assert dot_encode(perm) == DotStructure(1, (BLACK,), (WHITE,))
        (open_one,) = enum_ncc(1, 1)
        assert dot_encode(open_one) == DotStructure(1, (WHITE,), (WHITE,))

    def test_two_point_open_cell_has_two_structures(self):
        cell = enum_dots(2, 0, 1)
        assert len(cell) == 2
        assert set(cell) == {
            DotStructure(2, (WHITE, BLACK), (WHITE, WHITE)),
            DotStructure(2, (BLACK, WHITE), (WHITE, WHITE)),
        }

    def test_designated_block_carries_no_marks(self):
        h = CircularHalfPerm(
            n=3,
            perm=Perm((2, 1, 3)),
            designated=(1, 2),
            designated_in="perm",
        )
        d = dot_encode(h)
        # the lone undesignated block {3} is initial at 3 and closed there
        assert d == DotStructure(
            3, (BLACK, BLACK, WHITE), (WHITE, WHITE, BLACK)
        )
        assert dot_decode(d) == h

    def test_string_form(self):
        d = DotStructure(2, (WHITE, BLACK), (WHITE, WHITE))
        assert str(d) == "ww bw"
        assert d.to_json() == {
            "n": 2,
            "unprimed": ["white", "black"],
            "primed": ["white", "white"],
        }


class TestValidation:
    def test_rail_lengths(self):
        with pytest.raises(ValueError, match="one color per point"):
            DotStructure(2, (BLACK,), (WHITE, WHITE))

    def test_bad_color(self):
        with pytest.raises(ValueError, match="bad color"):
            DotStructure(1, ("grey",), (WHITE,))

    def test_malformed_counts(self):
        with pytest.raises(ValueError, match="malformed"):
            DotStructure(2, (BLACK, BLACK), (BLACK, WHITE))

    def test_enum_range(self):
        with pytest.raises(ValueError, match="j\\+k <= n"):
            enum_dots(3, 2, 2)
        with pytest.raises(ValueError, match="j\\+k <= n"):
            enum_dots(2, -1, 1)

    def test_recursion_class_needs_a_point(self):
        with pytest.raises(ValueError, match="last point"):
            recursion_class(CircularHalfPerm(n=0, perm=Perm(())))

    def test_zero_target_guards(self):
        k1 = enum_ncc(2, 1)[0]
        k2 = enum_ncc(2, 2)[0]
        with pytest.raises(ValueError, match="class 1 from a k=1"):
            circular_insert(2, k1, zero_target=True)
        with pytest.raises(ValueError, match="class 1 from a k=1"):
            circular_insert(1, k2, zero_target=True)
        with pytest.raises(ValueError, match="class must be"):
            circular_insert(5, k1)


class TestBijection:
    @pytest.mark.parametrize("n", range(0, 9))
    def test_counts_and_round_trips(self, n):
        per_cell = Counter()
        for k in range(0, n + 1):
            for h in enum_ncc(n, k):
                d = dot_encode(h)
                assert (d.j, d.k) == (h.closed_weight_exponent(), h.k)
                assert dot_decode(d) == h
                per_cell[(d.j, d.k)] += 1
        assert per_cell == {
            (j, k): comb(n, j) * comb(n, j + k)
            for j in range(n + 1)
            for k in range(n - j + 1)
            if comb(n, j) * comb(n, j + k)
        }

    @pytest.mark.parametrize("n", range(0, 7))
    def test_decode_covers_every_structure(self, n):
        for j in range(0, n + 1):
            for k in range(0, n - j + 1):
                cell = enum_dots(n, j, k)
                assert len(cell) == comb(n, j) * comb(n, j + k)
                images = set()
                for d in cell:
                    h = dot_decode(d)
                    assert (h.closed_weight_exponent(), h.k) == (j, k)
                    assert dot_encode(h) == d
                    images.add(h)
                assert len(images) == len(cell)

    def test_generating_polynomial_from_counts(self):
        # column sums of the binomial table reproduce the weighted counts
        for n in range(0, 9):
            for k in range(0, n + 1):
                poly = sum(
                    (
                        PolyC.monomial(j, comb(n, j) * comb(n, j + k))
                        for j in range(0, n - k + 1)
                    ),
                    PolyC.zero(),
                )
                assert poly == gbar(n, k)


class TestRecursionMaps:
    @pytest.mark.parametrize("n1", range(1, 7))
    def test_buckets_biject_onto_target_cells(self, n1):
        n = n1 - 1
        for k in range(0, n1 + 1):
            buckets = {1: [], 2: [], 3: [], 4: []}
            for h in enum_ncc(n1, k):
                case = recursion_class(h)
                g = circular_remove(h)
                buckets[case].append(g)
                back = circular_insert(
                    case, g, zero_target=(k == 0 and case == 1)
                )
                assert back == h
            for case, tgt_k in ((1, k - 1), (2, k), (3, k), (4, k + 1)):
                if k == 0 and case in (1, 4):
                    tgt_k = 1  # both exceptional routes land one cell up
                if not 0 <= tgt_k <= n:
                    assert not buckets[case]
                    continue
                got = Counter(g.sort_key() for g in buckets[case])
                want = Counter(g.sort_key() for g in enum_ncc(n, tgt_k))
                assert got == want

    def test_weight_bookkeeping_per_case(self):
        for n1 in range(1, 6):
            for k in range(0, n1 + 1):
                for h in enum_ncc(n1, k):
                    case = recursion_class(h)
                    g = circular_remove(h)
                    j = h.closed_weight_exponent()
                    if k == 0 and case == 1:
                        assert g.closed_weight_exponent() == (n1 - 1) - j
                        assert g.k == 1
                    else:
                        drop = 0 if case in (1, 2) else 1
                        assert g.closed_weight_exponent() == j - drop
                        assert g.k == k + {1: -1, 2: 0, 3: 0, 4: 1}[case]

    def test_one_point_recursion_identities(self):
        two_c = C + C
        for n1 in range(1, 8):
            n = n1 - 1
            assert gbar(n1, 0) == (ONE + C) * gbar(n, 0) + two_c * gbar(n, 1)
            for k in range(1, n1 + 1):
                assert gbar(n1, k) == gbar(n, k - 1) + (ONE + C) * gbar(
                    n, k
                ) + C * gbar(n, k + 1)

    def test_flip_route_reverses_weights(self):
        # the class-1 exception sends weight exponent j to n-j, matching
        # the symmetry comb(n, j)*comb(n, j-1) == comb(n, n-j)*comb(n, n-j+1)
        n1 = 4
        flipped = [
            circular_remove(h)
            for h in enum_ncc(n1, 0)
            if recursion_class(h) == 1
        ]
        got = Counter(g.closed_weight_exponent() for g in flipped)
        want = Counter(
            (n1 - 1) - h.closed_weight_exponent()
            for h in enum_ncc(n1, 0)
            if recursion_class(h) == 1
        )
        assert got == want
        assert all(g.k == 1 for g in flipped)
