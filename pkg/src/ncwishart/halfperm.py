"""Circular and linear half-permutations: cutting an annulus in two.

A circular half-permutation is one circle's worth of an annular
permutation: a non-crossing permutation together with a record of which
blocks were severed (the *open* blocks) and where they exited (one point
per open block, all exits collected by a single cycle of the Kreweras
complement).  With zero open blocks the extra datum is instead a
*designated* block, taken either from the permutation or from its
complement.

`cut` and `reassemble` realize the annulus <-> pair-of-halves bijection:
an annular permutation with k through-cycles cuts into two halves with k
open blocks each, and a pair of such halves glues back together in
exactly k ways.

The weighted counts here (`weighted_count` over `enum_ncc` / `enum_ncl`)
are the brute-force route to the same numbers the triangular transition
matrices of `families` produce by exact linear algebra; the test suite
holds the two routes against each other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .perms import (
    DEFAULT_ANNULAR_CAP,
    AnnularPerm,
    Perm,
    complement,
    enum_nc,
    is_noncrossing,
    long_cycle,
    partition_to_perm,
)
from .polyc import PolyC

DEFAULT_DISC_CAP = 12


def _blocks(perm: Perm) -> tuple[tuple[int, ...], ...]:
    return perm.cycles()


def initial_point(perm: Perm, block, ref) -> int:
    """The initial point of `block` relative to the reference block `ref`.

    If the two share a point, that point (it is unique for valid
    configurations).  Otherwise walk the rotation forward from a point of
    `ref` and take the first arrival in `block`; the answer does not
    depend on the starting point chosen.
    """
    common = set(block) & set(ref)
    if common:
        if len(common) != 1:
            raise ValueError(f"blocks {block} and {ref} share {len(common)} points")
        return common.pop()
    n = perm.size
    cur = ref[0]
    members = set(block)
    for _ in range(n):
        cur = cur % n + 1
        if cur in members:
            return cur
    raise ValueError("walk never reached the block")


def final_point(perm: Perm, block, ref) -> int:
    return perm.inverse()(initial_point(perm, block, ref))


def _rotate_to(block: tuple[int, ...], start: int) -> tuple[int, ...]:
    i = block.index(start)
    return block[i:] + block[:i]


class WeightRule(enum.Enum):
    """Which block statistic becomes the exponent of c."""

    ALL_BLOCKS = "all"
    CLOSED_BLOCKS = "closed"


@dataclass(frozen=True)
class CircularHalfPerm:
    """One circle's half of a severed annular permutation.

    For k >= 1 open blocks: `bbar` is the cycle of the Kreweras
    complement collecting the exit points, and each entry of `opens` is a
    cycle of `perm` rotated to start at its exit (initial) point, the
    tuple sorted by those points.  For k = 0: `designated` names a block
    of `perm` (`designated_in="perm"`) or of its complement
    (`designated_in="complement"`).
    """

    n: int
    perm: Perm
    opens: tuple[tuple[int, ...], ...] = ()
    bbar: tuple[int, ...] | None = None
    designated: tuple[int, ...] | None = None
    designated_in: str | None = None

    def __post_init__(self) -> None:
        if self.perm.size != self.n:
            raise ValueError("permutation size mismatch")
        if not is_noncrossing(self.perm):
            raise ValueError(f"{self.perm} is not non-crossing")
        blocks = {frozenset(b) for b in _blocks(self.perm)}
        comp_blocks = {frozenset(b) for b in _blocks(complement(self.perm))}
        if self.opens:
            if self.designated is not None or self.designated_in is not None:
                raise ValueError("open blocks and a designated block are exclusive")
            if self.bbar is None:
                raise ValueError("open blocks need the collecting complement cycle")
            if frozenset(self.bbar) not in comp_blocks:
                raise ValueError(f"{self.bbar} is not a complement cycle")
            bbar = set(self.bbar)
            initials = []
            for block in self.opens:
                if frozenset(block) not in blocks:
                    raise ValueError(f"{block} is not a cycle of {self.perm}")
                exits = set(block) & bbar
                if len(exits) != 1:
                    raise ValueError(
                        f"open block {block} meets {self.bbar} in {len(exits)} points"
                    )
                x = exits.pop()
                if block != _rotate_to(tuple(sorted(block)), x):
                    raise ValueError(
                        f"open block {block} must be rotated to start at {x}"
                    )
                initials.append(x)
            if initials != sorted(initials):
                raise ValueError("open blocks must be sorted by initial point")
            if len(set(map(frozenset, self.opens))) != len(self.opens):
                raise ValueError("open blocks must be distinct")
        else:
            if self.bbar is not None:
                raise ValueError("a collecting cycle needs open blocks")
            if self.n == 0:
                if self.designated is not None or self.designated_in is not None:
                    raise ValueError("the empty diagram carries no designated block")
                return
            if self.designated is None or self.designated_in not in ("perm", "complement"):
                raise ValueError(
                    "zero open blocks need a designated block in 'perm' or 'complement'"
                )
            where = blocks if self.designated_in == "perm" else comp_blocks
            if frozenset(self.designated) not in where:
                raise ValueError(
                    f"{self.designated} is not a block of the {self.designated_in}"
                )
            if tuple(sorted(self.designated)) != self.designated:
                raise ValueError("designated block must be sorted")

    @property
    def k(self) -> int:
        return len(self.opens)

    def open_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(b) for b in self.opens)

    def closed_blocks(self) -> tuple[tuple[int, ...], ...]:
        open_sets = set(self.open_sets())
        return tuple(
            b for b in _blocks(self.perm) if frozenset(b) not in open_sets
        )

    @property
    def num_closed(self) -> int:
        return self.perm.num_cycles() - self.k

    def initial_points(self) -> tuple[int, ...]:
        return tuple(b[0] for b in self.opens)

    def final_points(self) -> tuple[int, ...]:
        inv = self.perm.inverse()
        return tuple(inv(b[0]) for b in self.opens)

    def closed_weight_exponent(self) -> int:
        """Exponent of c under the closed-blocks rule.

        With open blocks present this is simply the number of closed
        blocks.  With zero open blocks the designated block's location
        decides between c^(#blocks) (designated in the complement) and
        c^(#blocks - 1) (designated in the permutation).
        """
        if self.opens:
            return self.num_closed
        if self.designated is None:
            return 0
        if self.designated_in == "complement":
            return self.perm.num_cycles()
        return self.perm.num_cycles() - 1

    def sort_key(self):
        return (
            self.perm.image,
            self.opens,
            self.bbar or (),
            self.designated or (),
            self.designated_in or "",
        )

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "cycles": [list(c) for c in self.perm.cycles()],
            "open": [list(b) for b in self.opens],
        }
        if self.designated is not None:
            out["designated"] = {
                "block": list(self.designated),
                "in": self.designated_in,
            }
        else:
            out["designated"] = None
        return out

    def __str__(self) -> str:
        if self.n == 0:
            return "()"
        closed = "".join(
            "(" + ",".join(map(str, b)) + ")" for b in self.closed_blocks()
        )
        opened = "".join("[" + ",".join(map(str, b)) + "]" for b in self.opens)
        if self.designated is not None:
            mark = "c" if self.designated_in == "complement" else ""
            return closed + "*" + mark + "(" + ",".join(map(str, self.designated)) + ")"
        return opened + closed


def make_circular(
    n: int,
    blocks,
    open_sets,
    bbar,
) -> CircularHalfPerm:
    """Build a half-perm from raw block sets, recomputing all normal forms."""
    perm = partition_to_perm(tuple(tuple(sorted(b)) for b in blocks))
    bbar_t = tuple(sorted(bbar))
    opens = []
    for b in open_sets:
        b_sorted = tuple(sorted(b))
        x = initial_point(perm, b_sorted, bbar_t)
        opens.append(_rotate_to(b_sorted, x))
    opens.sort(key=lambda blk: blk[0])
    return CircularHalfPerm(n=n, perm=perm, opens=tuple(opens), bbar=bbar_t)


@dataclass(frozen=True)
class LinearHalfPerm:
    """A circular half-permutation whose collecting cycle contains 1.

    Cutting the circle open just before 1 turns it into a line; with no
    open blocks this is simply a non-crossing partition (represented
    here with the complement block through 1 designated, which gives the
    weight c^(#blocks) the plain partition should carry).
    """

    circ: CircularHalfPerm

    def __post_init__(self) -> None:
        c = self.circ
        if c.opens:
            if 1 not in c.bbar:
                raise ValueError("the collecting cycle must contain 1")
        elif c.n > 0:
            if c.designated_in != "complement" or 1 not in c.designated:
                raise ValueError(
                    "with no open blocks the designated block must be the "
                    "complement block through 1"
                )

    @property
    def n(self) -> int:
        return self.circ.n

    @property
    def perm(self) -> Perm:
        return self.circ.perm

    @property
    def k(self) -> int:
        return self.circ.k

    @property
    def opens(self):
        return self.circ.opens

    @property
    def num_closed(self) -> int:
        return self.circ.num_closed

    def closed_blocks(self):
        return self.circ.closed_blocks()

    def closed_weight_exponent(self) -> int:
        if self.circ.opens:
            return self.circ.num_closed
        return self.circ.perm.num_cycles()

    def sort_key(self):
        return self.circ.sort_key()

    def to_json(self) -> dict:
        return self.circ.to_json()

    def __str__(self) -> str:
        return str(self.circ)


def make_linear(n: int, blocks, open_sets) -> LinearHalfPerm:
    """Build a linear half-perm from raw block sets.

    The collecting cycle is forced: it is the complement block through 1.
    Raises ValueError if some open block fails to meet it.
    """
    perm = partition_to_perm(tuple(tuple(sorted(b)) for b in blocks))
    if n == 0:
        return LinearHalfPerm(CircularHalfPerm(n=0, perm=perm))
    comp = complement(perm)
    bbar = comp.cycle_containing(1)
    if not open_sets:
        return LinearHalfPerm(
            CircularHalfPerm(
                n=n,
                perm=perm,
                designated=tuple(sorted(bbar)),
                designated_in="complement",
            )
        )
    return LinearHalfPerm(make_circular(n, blocks, open_sets, bbar))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _check_cell(n: int, k: int, cap: int) -> None:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if n > cap:
        raise ValueError(f"n={n} exceeds cap={cap}; pass a larger cap= to override")


@lru_cache(maxsize=None)
def enum_ncc(n: int, k: int, cap: int = DEFAULT_DISC_CAP) -> tuple[CircularHalfPerm, ...]:
    """All circular half-permutations of [n] with k open blocks."""
    _check_cell(n, k, cap)
    if n == 0:
        return (CircularHalfPerm(n=0, perm=Perm(())),)
    out: list[CircularHalfPerm] = []
    for perm in enum_nc(n):
        blocks = _blocks(perm)
        comp_cycles = _blocks(complement(perm))
        if k == 0:
            for b in blocks:
                out.append(
                    CircularHalfPerm(
                        n=n, perm=perm, designated=tuple(sorted(b)), designated_in="perm"
                    )
                )
            for b in comp_cycles:
                out.append(
                    CircularHalfPerm(
                        n=n,
                        perm=perm,
                        designated=tuple(sorted(b)),
                        designated_in="complement",
                    )
                )
            continue
        for bbar in comp_cycles:
            bbar_set = set(bbar)
            meeting = [b for b in blocks if bbar_set & set(b)]
            if len(meeting) < k:
                continue
            for chosen in combinations(meeting, k):
                out.append(make_circular(n, blocks, chosen, bbar))
    out.sort(key=lambda h: h.sort_key())
    return tuple(out)


@lru_cache(maxsize=None)
def enum_ncl(n: int, k: int, cap: int = DEFAULT_DISC_CAP) -> tuple[LinearHalfPerm, ...]:
    """All linear half-permutations of [n] with k open blocks."""
    _check_cell(n, k, cap)
    if n == 0:
        return (make_linear(0, (), ()),)
    out: list[LinearHalfPerm] = []
    for perm in enum_nc(n):
        blocks = _blocks(perm)
        if k == 0:
            out.append(make_linear(n, blocks, ()))
            continue
        bbar = complement(perm).cycle_containing(1)
        bbar_set = set(bbar)
        meeting = [b for b in blocks if bbar_set & set(b)]
        if len(meeting) < k:
            continue
        for chosen in combinations(meeting, k):
            out.append(LinearHalfPerm(make_circular(n, blocks, chosen, bbar)))
    out.sort(key=lambda h: h.sort_key())
    return tuple(out)


def weighted_count(diagrams, weight=WeightRule.ALL_BLOCKS) -> PolyC:
    """Sum of c^(statistic) over the diagrams.

    `weight` is a WeightRule or a callable mapping a diagram to the
    integer exponent.
    """
    total = PolyC.zero()
    for d in diagrams:
        if callable(weight):
            e = weight(d)
        elif weight is WeightRule.ALL_BLOCKS:
            e = d.num_cycles() if hasattr(d, "num_cycles") else d.perm.num_cycles()
        elif weight is WeightRule.CLOSED_BLOCKS:
            if isinstance(d, (CircularHalfPerm, LinearHalfPerm)):
                e = d.closed_weight_exponent()
            elif isinstance(d, AnnularPerm):
                e = d.num_cycles() - len(d.through_cycles())
            else:
                e = d.num_cycles()
        else:
            raise TypeError(f"unsupported weight {weight!r}")
        total = total + PolyC.monomial(e)
    return total


# ---------------------------------------------------------------------------
# cut and reassemble
# ---------------------------------------------------------------------------


def cut(a: AnnularPerm) -> tuple[CircularHalfPerm, CircularHalfPerm]:
    """Sever an annular permutation into its two circular halves."""
    m, n = a.m, a.n
    perm = a.perm
    outer = tuple(range(1, m + 1))
    inner = tuple(range(m + 1, m + n + 1))
    comp_through = [
        set(cyc) for cyc in a.complement_perm().cycles() if min(cyc) <= m < max(cyc)
    ]
    exits = set().union(*comp_through)
    through = [set(cyc) for cyc in perm.cycles() if min(cyc) <= m < max(cyc)]

    halves = []
    for points, offset in ((outer, 0), (inner, m)):
        pset = set(points)
        induced = perm.induced(points)
        open_sets = [
            frozenset(x - offset for x in t & pset) for t in through
        ]
        bbar = frozenset(x - offset for x in exits & pset)
        size = len(points)
        comp_blocks = {frozenset(c) for c in complement(induced).cycles()}
        if bbar not in comp_blocks:
            raise AssertionError(
                f"exit set {sorted(bbar)} is not a complement cycle of {induced}"
            )
        halves.append(
            make_circular(size, induced.cycles(), open_sets, sorted(bbar))
        )
    return halves[0], halves[1]


def reassemble(
    h1: CircularHalfPerm, h2: CircularHalfPerm, s: int
) -> AnnularPerm:
    """Glue two halves with k open blocks each back into an annular
    permutation; the k choices of s in 1..k give the k distinct gluings."""
    k = h1.k
    if k == 0 or h2.k != k:
        raise ValueError(
            f"need matching open-block counts >= 1, got {h1.k} and {h2.k}"
        )
    if not 1 <= s <= k:
        raise ValueError(f"s must be in 1..{k}, got {s}")
    m, n = h1.n, h2.n
    xs = h1.initial_points()
    ys = tuple(y + m for y in h2.initial_points())
    image = list(range(1, m + n + 1))
    for i, j in enumerate(h1.perm.image, start=1):
        image[i - 1] = j
    for i, j in enumerate(h2.perm.image, start=1):
        image[m + i - 1] = j + m
    # transpositions (x_i, y_{k-i+s}) applied after the two halves
    swap = {}
    for i in range(1, k + 1):
        y = ys[(k - i + s - 1) % k]
        swap[xs[i - 1]] = y
        swap[y] = xs[i - 1]
    final = tuple(swap.get(j, j) for j in image)
    return AnnularPerm(m, n, Perm(final))


# ---------------------------------------------------------------------------
# the linear recursion's four-way split
# ---------------------------------------------------------------------------


def linear_case(h: LinearHalfPerm) -> int:
    """Which of the four removal cases the last point of h falls in.

    1: last point is an open singleton          -> k drops by one
    2: last point is in a larger open block     -> nothing changes
    3: last point is a closed singleton         -> one closed block fewer
    4: last point is in a larger closed block   -> that block opens up
    """
    last = h.n
    block = set(h.perm.cycle_containing(last))
    is_open = frozenset(block) in set(h.circ.open_sets())
    if is_open:
        return 1 if len(block) == 1 else 2
    return 3 if len(block) == 1 else 4


def linear_remove(h: LinearHalfPerm) -> LinearHalfPerm:
    """Remove the last point per the four-way split, one size down."""
    case = linear_case(h)
    last = h.n
    blocks = [set(b) for b in h.perm.cycles()]
    opens = [set(b) for b in h.opens]
    block = next(b for b in blocks if last in b)
    blocks.remove(block)
    reduced = block - {last}
    if case == 1:
        opens = [o for o in opens if o != block]
    elif case == 2:
        opens = [reduced if o == block else o for o in opens]
        blocks.append(reduced)
    elif case == 3:
        pass
    else:
        blocks.append(reduced)
        opens.append(reduced)
    return make_linear(h.n - 1, blocks, opens)


def linear_insert(case: int, h: LinearHalfPerm) -> LinearHalfPerm:
    """Inverse of `linear_remove` for the given case, one size up.

    Cases 2 and 4 attach the new point to the rightmost open block --
    the only attachment that keeps the configuration valid.
    """
    new = h.n + 1
    blocks = [set(b) for b in h.perm.cycles()]
    opens = [set(b) for b in h.opens]
    if case == 1:
        blocks.append({new})
        opens.append({new})
    elif case == 2:
        if not opens:
            raise ValueError("case 2 needs an open block")
        target = set(h.opens[-1])
        blocks.remove(target)
        blocks.append(target | {new})
        opens = [o | {new} if o == target else o for o in opens]
    elif case == 3:
        blocks.append({new})
    elif case == 4:
        if not opens:
            raise ValueError("case 4 needs an open block")
        target = set(h.opens[-1])
        blocks.remove(target)
        blocks.append(target | {new})
        opens = [o for o in opens if o != target]
    else:
        raise ValueError(f"no case {case}")
    return make_linear(new, blocks, opens)


# ---------------------------------------------------------------------------
# odd-open-block pairing: matching matrix columns to block statistics
# ---------------------------------------------------------------------------


def pair_up_odd(h: LinearHalfPerm) -> tuple[Perm, tuple[int, ...]]:
    """Fold a linear half-perm with 2t+1 open blocks into a plain
    non-crossing partition with a marked block.

    The open blocks, read left to right, are joined outside-in (first
    with last, second with second-last, ...); the middle one becomes the
    marked block.
    """
    k = h.k
    if k % 2 != 1:
        raise ValueError("needs an odd number of open blocks")
    t = (k - 1) // 2
    opens = sorted((set(b) for b in h.opens), key=min)
    blocks = [set(b) for b in h.closed_blocks()]
    for i in range(t):
        blocks.append(opens[i] | opens[k - 1 - i])
    middle = opens[t]
    blocks.append(middle)
    perm = partition_to_perm(tuple(tuple(sorted(b)) for b in blocks))
    if not is_noncrossing(perm):
        raise AssertionError("outside-in joining must stay non-crossing")
    return perm, tuple(sorted(middle))


def unfold_marked(perm: Perm, marked: tuple[int, ...]) -> LinearHalfPerm:
    """Inverse of `pair_up_odd`: split every block covering the marked
    one at the marked block's position and open all the pieces."""
    lo, hi = min(marked), max(marked)
    blocks = []
    opens = [set(marked)]
    for b in perm.cycles():
        bs = set(b)
        if bs == set(marked):
            continue
        if min(b) < lo and max(b) > hi:
            left = {x for x in bs if x < lo}
            right = {x for x in bs if x > hi}
            blocks.extend([left, right])
            opens.extend([left, right])
        else:
            blocks.append(bs)
    blocks.append(set(marked))
    return make_linear(perm.size, blocks, opens)


def lineardecomp_check(n: int, cap: int = DEFAULT_DISC_CAP) -> tuple[PolyC, PolyC]:
    """Two routes to the same polynomial: odd columns of the centered
    second-kind inverse table, against block-count-weighted non-crossing
    partitions.  Returns both; raises if they disagree."""
    from .families import Family, inverse_table

    if n > cap:
        raise ValueError(f"n={n} exceeds cap={cap}")
    inv = inverse_table(Family.PI, n + 1)
    lhs = PolyC.zero()
    for k in range((n - 1) // 2 + 1):
        lhs = lhs + PolyC.monomial(k) * inv.entry(n, 2 * k + 1)
    rhs = PolyC.zero()
    for perm in enum_nc(n):
        nb = perm.num_cycles()
        rhs = rhs + PolyC.monomial(nb - 1) * PolyC.const(nb)
    if lhs != rhs:
        raise AssertionError(f"route mismatch for n={n}: {lhs} vs {rhs}")
    return lhs, rhs
