"""Two-color dot encoding of circular half-permutations.

A dot structure places a black or white dot on each of the 2n positions
1, 1', 2, 2', ..., n, n' around a circle.  The structures with j black
dots on primed positions and j + k white dots on unprimed positions are
in bijection with the circular half-permutations of [n] having k open
and j closed blocks (j = weight exponent for k = 0, where the designated
block's location decides the count).  Since the number of such dot
structures is plainly C(n,j)·C(n,j+k), the bijection proves the
closed-block generating identities that the transition matrices of
`families` compute by linear algebra.

Decoding runs two rounds of cyclic first-available matching (blacks
consume the nearest available white counter-clockwise, then the leftover
primed whites consume unprimed whites the same way), squeezes i and i'
into one point, and reads blocks off the chord components.  Deleting the
last point's two dots realizes the one-point recursions; the four color
patterns at (n, n') are the four recursion terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .halfperm import CircularHalfPerm, initial_point, make_circular
from .perms import Perm, complement, partition_to_perm

BLACK = "black"
WHITE = "white"


@dataclass(frozen=True)
class DotStructure:
    """Colors for the 2n dot positions; index i holds point i+1's dots."""

    n: int
    unprimed: tuple[str, ...]
    primed: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.unprimed) != self.n or len(self.primed) != self.n:
            raise ValueError("need one color per point on each rail")
        for color in self.unprimed + self.primed:
            if color not in (BLACK, WHITE):
                raise ValueError(f"bad color {color!r}")
        if self.unprimed.count(WHITE) < self.primed.count(BLACK):
            raise ValueError(
                "malformed dot structure: fewer white unprimed dots than "
                "black primed dots"
            )

    @property
    def j(self) -> int:
        """Number of black dots on primed positions (closed-block count)."""
        return self.primed.count(BLACK)

    @property
    def k(self) -> int:
        """Open-block count: white unprimed dots in excess of j."""
        return self.unprimed.count(WHITE) - self.j

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "unprimed": list(self.unprimed),
            "primed": list(self.primed),
        }

    def __str__(self) -> str:
        sym = {BLACK: "b", WHITE: "w"}
        return " ".join(
            sym[u] + sym[p] for u, p in zip(self.unprimed, self.primed)
        )


def enum_dots(n: int, j: int, k: int) -> tuple[DotStructure, ...]:
    """All dot structures with j black primed and j+k white unprimed dots."""
    if n < 0 or j < 0 or k < 0 or j > n or j + k > n:
        raise ValueError(f"need 0 <= j, j+k <= n, got n={n}, j={j}, k={k}")
    out = []
    for black_primed in combinations(range(n), j):
        primed = [WHITE] * n
        for i in black_primed:
            primed[i] = BLACK
        for white_unprimed in combinations(range(n), j + k):
            unprimed = [BLACK] * n
            for i in white_unprimed:
                unprimed[i] = WHITE
            out.append(DotStructure(n, tuple(unprimed), tuple(primed)))
    return tuple(out)


def dot_encode(h: CircularHalfPerm) -> DotStructure:
    """Color the 2n dots from a circular half-permutation.

    Whites go on the initial point of every block (walked from the
    collecting cycle, or from the designated block when k = 0) and on
    every primed position that is not the final point of a closed block;
    a designated block of the partition itself gets no marks at all
    (black unprimed, white primed throughout).
    """
    n = h.n
    if n == 0:
        return DotStructure(0, (), ())
    unprimed = [BLACK] * n
    primed = [WHITE] * n
    perm = h.perm
    inv = perm.inverse()
    if h.k >= 1 or h.designated_in == "complement":
        ref = h.bbar if h.k >= 1 else h.designated
        open_sets = set(h.open_sets())
        for block in perm.cycles():
            init = initial_point(perm, block, ref)
            unprimed[init - 1] = WHITE
            if frozenset(block) not in open_sets:
                primed[inv(init) - 1] = BLACK
    else:
        designated = frozenset(h.designated)
        for block in perm.cycles():
            if frozenset(block) == designated:
                continue
            init = initial_point(perm, block, h.designated)
            unprimed[init - 1] = WHITE
            primed[inv(init) - 1] = BLACK
    return DotStructure(n, tuple(unprimed), tuple(primed))


def _cyclic_match(positions, is_open):
    """Cyclic first-available matching on one pass.

    Scanning clockwise, openers stack up and each closer takes the
    nearest unmatched opener behind it; closers left over at the end
    wrap around to the latest surviving openers (t-th leftover closer
    with the (W+1-t)-th leftover opener).  Returns the matched pairs as
    (opener, closer) and the openers that stayed unmatched.
    """
    stack: list[int] = []
    pairs: list[tuple[int, int]] = []
    hanging: list[int] = []
    for pos in positions:
        if is_open(pos):
            stack.append(pos)
        elif stack:
            pairs.append((stack.pop(), pos))
        else:
            hanging.append(pos)
    if len(hanging) > len(stack):
        raise ValueError("more closers than openers")
    w = len(stack)
    for t, pos in enumerate(hanging, start=1):
        pairs.append((stack[w - t], pos))
    return pairs, stack[: w - len(hanging)]


def _walk_accepts(colors, n: int, point: int) -> bool:
    """Clockwise white-minus-black count from the point's unprimed dot
    (own dot included) never dips below zero."""
    run = 0
    start = 2 * (point - 1)
    for step in range(2 * n):
        run += 1 if colors[(start + step) % (2 * n)] == WHITE else -1
        if run < 0:
            return False
    return True


def dot_decode(d: DotStructure) -> CircularHalfPerm:
    """Rebuild the circular half-permutation a dot structure encodes."""
    n = d.n
    if n == 0:
        return CircularHalfPerm(n=0, perm=Perm(()))
    j, k = d.j, d.k
    colors = [None] * (2 * n)
    for i in range(n):
        colors[2 * i] = d.unprimed[i]
        colors[2 * i + 1] = d.primed[i]

    pairs, leftover = _cyclic_match(
        range(2 * n), lambda pos: colors[pos] == WHITE
    )
    second, rest = _cyclic_match(leftover, lambda pos: pos % 2 == 0)
    assert not rest and len(second) == k

    # components of the chord graph after squeezing i with i'
    parent = list(range(n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in pairs + second:
        ra, rb = find(a // 2 + 1), find(b // 2 + 1)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for i in range(1, n + 1):
        groups.setdefault(find(i), []).append(i)
    blocks = tuple(tuple(sorted(g)) for g in groups.values())
    perm = partition_to_perm(blocks)

    if k == 0:
        if perm.num_cycles() == j:
            members = tuple(
                i for i in range(1, n + 1) if _walk_accepts(colors, n, i)
            )
            assert members
            comp = complement(perm)
            assert set(comp.cycle_containing(members[0])) == set(members)
            return CircularHalfPerm(
                n=n, perm=perm, designated=members, designated_in="complement"
            )
        assert perm.num_cycles() == j + 1
        unmarked = [
            b
            for b in blocks
            if all(d.primed[i - 1] == WHITE for i in b)
        ]
        assert len(unmarked) == 1
        return CircularHalfPerm(
            n=n, perm=perm, designated=unmarked[0], designated_in="perm"
        )

    initials = sorted(opener // 2 + 1 for opener, _ in second)
    by_point = {i: b for b in blocks for i in b}
    open_sets = {frozenset(by_point[i]) for i in initials}
    assert len(open_sets) == k
    bbar = complement(perm).cycle_containing(initials[0])
    assert set(initials) <= set(bbar)
    h = make_circular(n, blocks, open_sets, bbar)
    assert h.initial_points() == tuple(initials)
    return h


# ---------------------------------------------------------------------------
# one-point recursion on the dot side
# ---------------------------------------------------------------------------

_CLASS_OF_COLORS = {
    (WHITE, WHITE): 1,
    (BLACK, WHITE): 2,
    (WHITE, BLACK): 3,
    (BLACK, BLACK): 4,
}
_COLORS_OF_CLASS = {v: key for key, v in _CLASS_OF_COLORS.items()}

_FLIP = {BLACK: WHITE, WHITE: BLACK}


def recursion_class(h: CircularHalfPerm) -> int:
    """Which of the four recursion terms h's last point belongs to (the
    color pattern of its two dots)."""
    if h.n < 1:
        raise ValueError("the empty diagram has no last point")
    d = dot_encode(h)
    return _CLASS_OF_COLORS[(d.unprimed[-1], d.primed[-1])]


def circular_remove(h: CircularHalfPerm) -> CircularHalfPerm:
    """Delete the last point's dots and decode (the recursion maps).

    Classes 1/2 keep the weight exponent, classes 3/4 lower it by one;
    class 1 lowers the open count, class 4 raises it.  The exception is
    class 1 at k = 0, where deleting two whites would unbalance the
    structure: there all remaining colors flip, landing in the k = 1
    cell with weight exponent n - 1 - j.
    """
    k, j = h.k, h.closed_weight_exponent()
    case = recursion_class(h)
    d = dot_encode(h)
    unprimed, primed = d.unprimed[:-1], d.primed[:-1]
    if case == 1 and k == 0:
        unprimed = tuple(_FLIP[c] for c in unprimed)
        primed = tuple(_FLIP[c] for c in primed)
        want_k, want_j = 1, (h.n - 1) - j
    else:
        want_k = {1: k - 1, 2: k, 3: k, 4: k + 1}[case]
        want_j = j if case in (1, 2) else j - 1
    out = dot_decode(DotStructure(h.n - 1, unprimed, primed))
    assert out.k == want_k and out.closed_weight_exponent() == want_j
    return out


def circular_insert(
    case: int, h: CircularHalfPerm, *, zero_target: bool = False
) -> CircularHalfPerm:
    """Append a new last point with the class's dot colors (inverse of
    circular_remove).  zero_target inverts the color-flip route: it takes
    a k = 1 diagram back to the k = 0 cell's class-1 slot."""
    if case not in _COLORS_OF_CLASS:
        raise ValueError(f"class must be 1..4, got {case}")
    if zero_target:
        if case != 1 or h.k != 1:
            raise ValueError("the flip route runs class 1 from a k=1 diagram")
    d = dot_encode(h)
    unprimed, primed = d.unprimed, d.primed
    if zero_target:
        unprimed = tuple(_FLIP[c] for c in unprimed)
        primed = tuple(_FLIP[c] for c in primed)
    cu, cp = _COLORS_OF_CLASS[case]
    return dot_decode(DotStructure(h.n + 1, unprimed + (cu,), primed + (cp,)))
