"""Permutations and non-crossing enumeration on the disc and the annulus.

Points are labeled 1..n.  A partition into blocks is identified with the
permutation whose cycles traverse each block in increasing order; a
partition of the disc is non-crossing exactly when the cycle counts of the
permutation and its complement saturate the genus bound

    #(p) + #(complement(p)) == n + 1.

On the annulus with m outer and n inner points the reference rotation has
two cycles (1..m)(m+1..m+n) and the saturation reads #(p) + #(rot p^-1)
== m + n, together with at least one cycle meeting both circles.
Enumeration is brute force by design -- set partitions (disc) or set
partitions with all cyclic orderings (annulus) pushed through the
saturation filter -- so that the structured constructions elsewhere in the
package are checked against an unstructured route.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations as _perm_orders
from itertools import product as _product

DEFAULT_ANNULAR_CAP = 12


@dataclass(frozen=True)
class Perm:
    """A permutation of {1, ..., n}, stored as its image tuple."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.image)
        if sorted(self.image) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {self.image}")

    @property
    def size(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Perm":
        img = list(range(1, n + 1))
        seen = set()
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)((cyc[0],))):
                if a in seen:
                    raise ValueError(f"point {a} appears twice")
                seen.add(a)
                img[a - 1] = b
        return cls(tuple(img))

    def inverse(self) -> "Perm":
        inv = [0] * self.size
        for i, j in enumerate(self.image, start=1):
            inv[j - 1] = i
        return Perm(tuple(inv))

    def compose(self, other: "Perm") -> "Perm":
        """(self . other)(i) = self(other(i))."""
        if self.size != other.size:
            raise ValueError("size mismatch")
        return Perm(tuple(self.image[j - 1] for j in other.image))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Cycles rotated to start at their minimum, sorted by minimum."""
        out = []
        seen = [False] * self.size
        for i in range(1, self.size + 1):
            if not seen[i - 1]:
                cyc = []
                j = i
                while not seen[j - 1]:
                    seen[j - 1] = True
                    cyc.append(j)
                    j = self.image[j - 1]
                out.append(tuple(cyc))
        return tuple(out)

    def num_cycles(self) -> int:
        seen = [False] * self.size
        count = 0
        for i in range(self.size):
            if not seen[i]:
                count += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = self.image[j] - 1
        return count

    def cycle_containing(self, i: int) -> tuple[int, ...]:
        cyc = [i]
        j = self.image[i - 1]
        while j != i:
            cyc.append(j)
            j = self.image[j - 1]
        k = cyc.index(min(cyc))
        return tuple(cyc[k:] + cyc[:k])

    def induced(self, points: tuple[int, ...]) -> "Perm":
        """First-return permutation on a subset, relabeled order-preserving to 1..len."""
        pts = tuple(sorted(points))
        index = {p: i + 1 for i, p in enumerate(pts)}
        pset = set(pts)
        img = []
        for p in pts:
            q = self.image[p - 1]
            while q not in pset:
                q = self.image[q - 1]
            img.append(index[q])
        return Perm(tuple(img))

    def __str__(self) -> str:
        return format_cycles(self.cycles())


def format_cycles(cycles) -> str:
    return "".join("(" + ",".join(str(p) for p in cyc) + ")" for cyc in cycles)


def long_cycle(n: int) -> Perm:
    if n == 0:
        return Perm(())
    return Perm(tuple(range(2, n + 1)) + (1,))


def annular_rotation(m: int, n: int) -> Perm:
    """The two-cycle rotation (1..m)(m+1..m+n)."""
    outer = tuple(range(2, m + 1)) + (1,)
    inner = tuple(range(m + 2, m + n + 1)) + (m + 1,)
    return Perm(outer + inner)


def complement(p: Perm) -> Perm:
    """The complement permutation on the disc (rotation composed with inverse)."""
    return long_cycle(p.size).compose(p.inverse())


kreweras = complement


def is_noncrossing(p: Perm) -> bool:
    if p.size == 0:
        return True
    return p.num_cycles() + complement(p).num_cycles() == p.size + 1


# ---------------------------------------------------------------------------
# disc enumeration
# ---------------------------------------------------------------------------


def set_partitions(n: int):
    """All set partitions of {1..n} as tuples of increasing blocks,
    in restricted-growth-string order."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n
    maxes = [0] * n

    while True:
        blocks: list[list[int]] = [[] for _ in range(max(rgs) + 1)]
        for i, b in enumerate(rgs):
            blocks[b].append(i + 1)
        yield tuple(tuple(b) for b in blocks)
        # advance the restricted growth string
        i = n - 1
        while i > 0 and rgs[i] == maxes[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        maxes[i] = max(maxes[i - 1], rgs[i])
        for j in range(i + 1, n):
            rgs[j] = 0
            maxes[j] = maxes[i]


def partition_to_perm(blocks) -> Perm:
    n = sum(len(b) for b in blocks)
    return Perm.from_cycles(n, [tuple(sorted(b)) for b in blocks])


@lru_cache(maxsize=None)
def enum_nc(n: int) -> tuple[Perm, ...]:
    """All non-crossing partitions of the disc, as increasing-cycle permutations."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return (Perm(()),)
    found = [
        p
        for blocks in set_partitions(n)
        if is_noncrossing(p := partition_to_perm(blocks))
    ]
    found.sort(key=lambda p: p.image)
    return tuple(found)


# ---------------------------------------------------------------------------
# annular enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnularPerm:
    """A non-crossing permutation of an (m, n)-annulus.

    Outer points are 1..m, inner points m+1..m+n.  Validity (connectivity +
    saturation) is enforced on construction.
    """

    m: int
    n: int
    perm: Perm

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("both circles need at least one point")
        if self.perm.size != self.m + self.n:
            raise ValueError("permutation size must be m + n")
        if not is_annular_noncrossing(self.m, self.n, self.perm):
            raise ValueError(
                f"{self.perm} is not a connected non-crossing permutation "
                f"of the ({self.m},{self.n})-annulus"
            )

    def cycles(self):
        return self.perm.cycles()

    def num_cycles(self) -> int:
        return self.perm.num_cycles()

    def rotation(self) -> Perm:
        return annular_rotation(self.m, self.n)

    def complement_perm(self) -> Perm:
        return self.rotation().compose(self.perm.inverse())

    def through_cycles(self) -> tuple[tuple[int, ...], ...]:
        """Cycles meeting both circles."""
        return tuple(
            cyc
            for cyc in self.perm.cycles()
            if min(cyc) <= self.m < max(cyc)
        )

    def __str__(self) -> str:
        return format_cycles(self.perm.cycles())


def is_annular_noncrossing(m: int, n: int, p: Perm) -> bool:
    if p.size != m + n:
        return False
    connected = any(min(cyc) <= m < max(cyc) for cyc in p.cycles())
    if not connected:
        return False
    rot = annular_rotation(m, n)
    return p.num_cycles() + rot.compose(p.inverse()).num_cycles() == m + n


def iter_snc_images(m: int, n: int, prune: bool = True):
    """Yield image tuples of all connected non-crossing permutations of
    the (m, n)-annulus, streamed in set-partition sweep order.

    Each set partition of [m + n] is expanded into candidate cycle
    orderings and every candidate is pushed through the cycle-count
    saturation filter.  With prune=True only geometrically admissible
    orderings are tried: a pure block is traversed increasingly, and a
    block meeting both circles is traversed as one contiguous outer run
    followed by one contiguous inner run, each run a rotation of the
    sorted points (a strip can attach to either circle at any offset).
    With prune=False every cyclic ordering of every block is tried.  The
    filter is identical in both modes, so pruning can only ever drop
    candidates, and the test suite holds the two modes against each other
    on small annuli along with the closed-form count.
    """
    total = m + n
    g = [0] * total  # the two-arc rotation, 0-based
    for i in range(total):
        g[i] = (i + 1) % m if i < m else m + (i - m + 1) % n
    rng = range(total)

    for blocks in set_partitions(total):
        nb = len(blocks)
        target = total - nb
        if target < 1:
            continue
        if not any(b[0] <= m < b[-1] for b in blocks):
            continue
        per_block = []
        for b in blocks:
            b0 = tuple(x - 1 for x in b)  # 0-based, increasing
            if len(b0) == 1:
                per_block.append((((b0[0], b0[0]),),))
                continue
            seqs = []
            if prune:
                split = 0
                while split < len(b0) and b0[split] < m:
                    split += 1
                outer, inner = b0[:split], b0[split:]
                if not outer or not inner:
                    seqs.append(b0)
                else:
                    for r in range(len(outer)):
                        run_out = outer[r:] + outer[:r]
                        for t in range(len(inner)):
                            seqs.append(run_out + inner[t:] + inner[:t])
            else:
                head, rest = b0[0], b0[1:]
                for order in _perm_orders(rest):
                    seqs.append((head,) + order)
            per_block.append(
                tuple(
                    tuple((seq[i], seq[(i + 1) % len(seq)]) for i in range(len(seq)))
                    for seq in seqs
                )
            )
        img = [0] * total
        inv = [0] * total
        for combo in _product(*per_block):
            for pairs in combo:
                for i, j in pairs:
                    img[i] = j
                    inv[j] = i
            seen = 0
            cnt = 0
            for i0 in rng:
                if not (seen >> i0) & 1:
                    cnt += 1
                    j = i0
                    while not (seen >> j) & 1:
                        seen |= 1 << j
                        j = g[inv[j]]
            if cnt == target:
                yield tuple(x + 1 for x in img)


def _check_annulus(m: int, n: int, cap: int) -> None:
    if m < 1 or n < 1:
        raise ValueError("both circles need at least one point")
    if m + n > cap:
        raise ValueError(
            f"m+n={m + n} exceeds cap={cap}; pass a larger cap= to override "
            "(enumeration cost grows quickly)"
        )


@lru_cache(maxsize=None)
def enum_snc(m: int, n: int, cap: int = DEFAULT_ANNULAR_CAP) -> tuple[AnnularPerm, ...]:
    """All connected non-crossing permutations of the (m, n)-annulus,
    sorted by image tuple.

    Materializes the stream from iter_snc_images; for large annuli
    (m + n near the cap) prefer iterating the stream directly.
    """
    _check_annulus(m, n, cap)
    images = sorted(iter_snc_images(m, n))
    return tuple(AnnularPerm(m, n, Perm(img)) for img in images)
