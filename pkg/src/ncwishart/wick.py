"""Truncated Fock-space model for Wick products (free Kailath-Segall
polynomials) over a finite-dimensional *-algebra with a tracial state.

The half-permutation calculus from :mod:`ncwishart.halfperm` indexes
generalized Wick products ``W_pi``; this module realizes them as linear
operators on a depth-truncated full Fock space so that the product,
decomposition, and adjoint identities can be verified as dense numerical
residuals.  Truncation is handled by contract: an operator that raises
degree by at most ``g`` acts exactly on vectors of degree at most
``depth - g``, and every verification restricts to that subspace.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .halfperm import LinearHalfPerm, enum_ncl, make_linear

__all__ = [
    "RESIDUAL_TOL",
    "TracialAlgebra",
    "scalar_algebra",
    "matrix_algebra",
    "function_algebra",
    "FockVector",
    "FockOperator",
    "identity_operator",
    "creation",
    "annihilation",
    "preservation",
    "p_operator",
    "wick",
    "w_pi",
    "all_ncl",
    "open_singletons",
    "split_images",
    "prepend_split_is_bijection",
    "convolution",
    "OperatorCheck",
    "operator_residual",
    "adjoint_residual",
    "verify_vacuum",
    "verify_p_adjoint",
    "verify_wick_adjoint",
    "verify_decomposition",
    "verify_prepend",
    "verify_product",
    "verify_inductive_step",
    "wick_report",
]

RESIDUAL_TOL = 1e-9

_AXIOM_TOL = 1e-12
_AXIOM_SAMPLES = 8


# ---------------------------------------------------------------------------
# the coefficient algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TracialAlgebra:
    """A finite-dimensional unital *-algebra carrying a tracial state.

    Elements are complex coefficient vectors over a fixed basis.
    ``mult[i, j, k]`` is the coefficient of basis element ``k`` in the
    product of basis elements ``i`` and ``j``; ``star_mat`` maps the
    conjugated coefficients of an element to the coefficients of its
    adjoint; ``psi_vec[i]`` is the state applied to basis element ``i``;
    ``unit`` holds the coefficients of the identity.

    The state axioms (unit normalization, traciality on basis pairs,
    positivity on a fixed random sample, involutivity of the star) are
    asserted at construction.
    """

    name: str
    mult: np.ndarray
    star_mat: np.ndarray
    psi_vec: np.ndarray
    unit: np.ndarray

    def __post_init__(self) -> None:
        d = self.dim
        if self.mult.shape != (d, d, d):
            raise ValueError("multiplication table shape does not match the basis")
        if self.star_mat.shape != (d, d) or self.unit.shape != (d,):
            raise ValueError("structure table shapes are inconsistent")
        self._check_axioms()

    @property
    def dim(self) -> int:
        return len(self.psi_vec)

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.mult)

    def product(self, letters: Iterable[np.ndarray]) -> np.ndarray:
        return reduce(self.multiply, letters)

    def star(self, x: np.ndarray) -> np.ndarray:
        return self.star_mat @ np.conj(x)

    def psi(self, x: np.ndarray) -> complex:
        return complex(self.psi_vec @ x)

    @cached_property
    def gram(self) -> np.ndarray:
        """Inner-product matrix of the basis: state of (adjoint of j) * i."""
        d = self.dim
        basis = np.eye(d, dtype=complex)
        return np.array(
            [
                [
                    self.psi(self.multiply(self.star(basis[j]), basis[i]))
                    for j in range(d)
                ]
                for i in range(d)
            ]
        )

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        re, im = rng.standard_normal(self.dim), rng.standard_normal(self.dim)
        return (re + 1j * im) / np.sqrt(2.0)

    def _check_axioms(self) -> None:
        d = self.dim
        basis = np.eye(d, dtype=complex)
        for i in range(d):
            b = basis[i]
            if not np.allclose(self.multiply(self.unit, b), b, atol=_AXIOM_TOL):
                raise ValueError("unit is not a left identity")
            if not np.allclose(self.multiply(b, self.unit), b, atol=_AXIOM_TOL):
                raise ValueError("unit is not a right identity")
        if abs(self.psi(self.unit) - 1.0) > _AXIOM_TOL:
            raise ValueError("the state must send the unit to 1")
        for i in range(d):
            for j in range(d):
                lhs = self.psi(self.multiply(basis[i], basis[j]))
                rhs = self.psi(self.multiply(basis[j], basis[i]))
                if abs(lhs - rhs) > _AXIOM_TOL:
                    raise ValueError("the state is not tracial on basis pairs")
        rng = np.random.default_rng(1851)
        for _ in range(_AXIOM_SAMPLES):
            x = self.random_element(rng)
            if not np.allclose(self.star(self.star(x)), x, atol=_AXIOM_TOL):
                raise ValueError("the star map is not an involution")
            val = self.psi(self.multiply(self.star(x), x))
            if val.real < -_AXIOM_TOL or abs(val.imag) > _AXIOM_TOL:
                raise ValueError("the state is not positive")


def scalar_algebra() -> TracialAlgebra:
    """The complex numbers with the identity state."""
    return TracialAlgebra(
        name="scalars",
        mult=np.ones((1, 1, 1), dtype=complex),
        star_mat=np.eye(1, dtype=complex),
        psi_vec=np.ones(1, dtype=complex),
        unit=np.ones(1, dtype=complex),
    )


def matrix_algebra() -> TracialAlgebra:
    """Full 2x2 complex matrices with the normalized trace.

    Basis: matrix units E(a, b) at index 2a + b.
    """
    idx = lambda a, b: 2 * a + b  # noqa: E731 - local index helper
    mult = np.zeros((4, 4, 4), dtype=complex)
    star = np.zeros((4, 4), dtype=complex)
    psi = np.zeros(4, dtype=complex)
    unit = np.zeros(4, dtype=complex)
    for a in range(2):
        for b in range(2):
            star[idx(b, a), idx(a, b)] = 1.0
            for c in range(2):
                for e in range(2):
                    if b == c:
                        mult[idx(a, b), idx(c, e), idx(a, e)] = 1.0
        psi[idx(a, a)] = 0.5
        unit[idx(a, a)] = 1.0
    return TracialAlgebra(
        name="matrix_2x2", mult=mult, star_mat=star, psi_vec=psi, unit=unit
    )


def function_algebra() -> TracialAlgebra:
    """Complex functions on three points with weights 1/2, 1/3, 1/6.

    A commutative algebra whose state is faithful but not a multiple of
    the uniform one, so it separates bookkeeping mistakes that the
    matrix trace would mask.
    """
    d = 3
    mult = np.zeros((d, d, d), dtype=complex)
    for i in range(d):
        mult[i, i, i] = 1.0
    return TracialAlgebra(
        name="functions_3pt",
        mult=mult,
        star_mat=np.eye(d, dtype=complex),
        psi_vec=np.array([1 / 2, 1 / 3, 1 / 6], dtype=complex),
        unit=np.ones(d, dtype=complex),
    )


# ---------------------------------------------------------------------------
# truncated Fock space
# ---------------------------------------------------------------------------


def _segment_sizes(dim: int, depth: int) -> tuple[int, ...]:
    return tuple(dim**r for r in range(depth + 1))


@dataclass(frozen=True)
class FockVector:
    """A vector in the depth-truncated full Fock space.

    ``segments[r]`` holds the flat coefficient array of the degree-``r``
    tensor words (first tensor factor is the major index).  ``truncated``
    records that a creation operator pushed nonzero mass past the depth
    cap somewhere in this vector's history.
    """

    depth: int
    dim: int
    segments: tuple[np.ndarray, ...]
    truncated: bool = False

    def __post_init__(self) -> None:
        if len(self.segments) != self.depth + 1:
            raise ValueError("segment count does not match the depth cap")
        for r, seg in enumerate(self.segments):
            if seg.shape != (self.dim**r,):
                raise ValueError(f"segment {r} has the wrong length")

    @classmethod
    def vacuum(cls, dim: int, depth: int) -> "FockVector":
        segs = [np.zeros(s, dtype=complex) for s in _segment_sizes(dim, depth)]
        segs[0][0] = 1.0
        return cls(depth, dim, tuple(segs))

    @classmethod
    def tensor_word(
        cls, letters: Sequence[np.ndarray], dim: int, depth: int
    ) -> "FockVector":
        if len(letters) > depth:
            raise ValueError("word is longer than the depth cap")
        segs = [np.zeros(s, dtype=complex) for s in _segment_sizes(dim, depth)]
        word = reduce(np.kron, [np.asarray(w, dtype=complex) for w in letters],
                      np.ones(1, dtype=complex))
        segs[len(letters)] = word
        return cls(depth, dim, tuple(segs))

    def _combine(self, other: "FockVector", sign: complex) -> "FockVector":
        if (self.depth, self.dim) != (other.depth, other.dim):
            raise ValueError("vectors live on different spaces")
        segs = tuple(a + sign * b for a, b in zip(self.segments, other.segments))
        return FockVector(
            self.depth, self.dim, segs, self.truncated or other.truncated
        )

    def __add__(self, other: "FockVector") -> "FockVector":
        return self._combine(other, 1.0)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self._combine(other, -1.0)

    def __mul__(self, scalar: complex) -> "FockVector":
        segs = tuple(scalar * s for s in self.segments)
        return FockVector(self.depth, self.dim, segs, self.truncated)

    __rmul__ = __mul__

    def __neg__(self) -> "FockVector":
        return self * (-1.0)

    def flat(self) -> np.ndarray:
        return np.concatenate(self.segments)

    def norm(self) -> float:
        return float(np.sqrt(sum(np.vdot(s, s).real for s in self.segments)))

    def degree_range(self) -> tuple[int, int]:
        """Lowest and highest degree carrying a nonzero coefficient."""
        live = [r for r, s in enumerate(self.segments) if np.any(s != 0)]
        if not live:
            return (0, -1)
        return (live[0], live[-1])


def _basis_vectors(dim: int, depth: int, max_degree: int) -> Iterator[FockVector]:
    """Coordinate tensor-word basis vectors of degree at most ``max_degree``."""
    for r in range(max_degree + 1):
        for flat in range(dim**r):
            segs = [np.zeros(s, dtype=complex) for s in _segment_sizes(dim, depth)]
            segs[r][flat] = 1.0
            yield FockVector(depth, dim, tuple(segs))


def _subspace_dim(dim: int, max_degree: int) -> int:
    return sum(dim**r for r in range(max_degree + 1))


def gram_apply(alg: TracialAlgebra, v: FockVector) -> FockVector:
    """Apply the block-diagonal Gram matrix (per-degree tensor powers)."""
    G = alg.gram
    d = v.dim
    out = []
    for r, seg in enumerate(v.segments):
        if r == 0:
            out.append(seg.copy())
            continue
        arr = seg.reshape((d,) * r)
        for ax in range(r):
            arr = np.moveaxis(np.tensordot(G, arr, axes=([1], [ax])), 0, ax)
        out.append(arr.reshape(-1))
    return FockVector(v.depth, v.dim, tuple(out), v.truncated)


def fock_inner(alg: TracialAlgebra, u: FockVector, v: FockVector) -> complex:
    """Inner product, linear in the first argument."""
    gu = gram_apply(alg, u)
    return complex(sum(np.vdot(b, a) for a, b in zip(gu.segments, v.segments)))


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FockOperator:
    """A linear map on the truncated Fock space, applied by rule.

    ``creation_degree`` bounds how far the operator can raise the degree
    along any path of its expression tree; inputs of degree at most
    ``depth - creation_degree`` are therefore mapped exactly, with no
    truncation loss anywhere in the evaluation.
    """

    depth: int
    dim: int
    creation_degree: int
    fn: Callable[[FockVector], FockVector]

    def __call__(self, v: FockVector) -> FockVector:
        if (v.depth, v.dim) != (self.depth, self.dim):
            raise ValueError("vector does not live on this operator's space")
        return self.fn(v)

    @property
    def exact_input_degree(self) -> int:
        """Largest input degree on which the action is guaranteed exact."""
        return self.depth - self.creation_degree

    def _like(self, creation_degree: int, fn) -> "FockOperator":
        return FockOperator(self.depth, self.dim, creation_degree, fn)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        if (self.depth, self.dim) != (other.depth, other.dim):
            raise ValueError("operators live on different spaces")
        return self._like(
            self.creation_degree + other.creation_degree,
            lambda v: self.fn(other.fn(v)),
        )

    def __add__(self, other: "FockOperator") -> "FockOperator":
        if (self.depth, self.dim) != (other.depth, other.dim):
            raise ValueError("operators live on different spaces")
        return self._like(
            max(self.creation_degree, other.creation_degree),
            lambda v: self.fn(v) + other.fn(v),
        )

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "FockOperator":
        return self._like(self.creation_degree, lambda v: self.fn(v) * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "FockOperator":
        return self * (-1.0)


def identity_operator(dim: int, depth: int) -> FockOperator:
    return FockOperator(depth, dim, 0, lambda v: v)


def creation(alg: TracialAlgebra, d_el: np.ndarray, depth: int) -> FockOperator:
    """Left creation: prepend the element as a new first tensor factor.

    Raises the degree by exactly one; mass in the top degree is dropped
    and the result is flagged as truncated.
    """
    d_el = np.asarray(d_el, dtype=complex)
    dim = alg.dim

    def apply(v: FockVector) -> FockVector:
        segs = [np.zeros(s, dtype=complex) for s in _segment_sizes(dim, depth)]
        for r in range(depth):
            segs[r + 1] = np.kron(d_el, v.segments[r])
        dropped = bool(np.any(v.segments[depth] != 0)) and bool(np.any(d_el != 0))
        return FockVector(depth, dim, tuple(segs), v.truncated or dropped)

    return FockOperator(depth, dim, 1, apply)


def annihilation(alg: TracialAlgebra, d_el: np.ndarray, depth: int) -> FockOperator:
    """Left annihilation: pair the first tensor factor against the element.

    Lowers the degree by exactly one and kills the vacuum.
    """
    d_el = np.asarray(d_el, dtype=complex)
    dim = alg.dim
    basis = np.eye(dim, dtype=complex)
    pair = np.array(
        [alg.psi(alg.multiply(alg.star(d_el), basis[i])) for i in range(dim)]
    )

    def apply(v: FockVector) -> FockVector:
        segs = [np.zeros(s, dtype=complex) for s in _segment_sizes(dim, depth)]
        for r in range(1, depth + 1):
            segs[r - 1] = pair @ v.segments[r].reshape(dim, -1)
        return FockVector(depth, dim, tuple(segs), v.truncated)

    return FockOperator(depth, dim, 0, apply)


def preservation(alg: TracialAlgebra, d_el: np.ndarray, depth: int) -> FockOperator:
    """Multiply the first tensor factor on the left; kills the vacuum."""
    d_el = np.asarray(d_el, dtype=complex)
    dim = alg.dim
    left = np.tensordot(d_el, alg.mult, axes=(0, 0)).T  # [k, i] of d * b_i

    def apply(v: FockVector) -> FockVector:
        segs = [np.zeros(s, dtype=complex) for s in _segment_sizes(dim, depth)]
        for r in range(1, depth + 1):
            segs[r] = (left @ v.segments[r].reshape(dim, -1)).reshape(-1)
        return FockVector(depth, dim, tuple(segs), v.truncated)

    return FockOperator(depth, dim, 0, apply)


def p_operator(alg: TracialAlgebra, d_el: np.ndarray, depth: int) -> FockOperator:
    """Creation + annihilation-of-the-adjoint + preservation + state term."""
    if depth < 1:
        raise ValueError("the depth cap must be at least 1")
    d_el = np.asarray(d_el, dtype=complex)
    return (
        creation(alg, d_el, depth)
        + annihilation(alg, alg.star(d_el), depth)
        + preservation(alg, d_el, depth)
        + alg.psi(d_el) * identity_operator(alg.dim, depth)
    )


def wick(
    alg: TracialAlgebra, word: Sequence[np.ndarray], depth: int
) -> FockOperator:
    """The Wick product of a tensor word: the unique polynomial in the
    ``p`` operators that maps the vacuum to the word.

    Built by the four-term recursion that peels off the leftmost letter;
    the empty word gives the identity.
    """
    letters = tuple(np.asarray(w, dtype=complex) for w in word)
    if len(letters) > depth:
        raise ValueError(
            f"word of length {len(letters)} exceeds the depth cap {depth}"
        )
    return _wick(alg, letters, depth)


def _wick(alg, letters, depth):
    if not letters:
        return identity_operator(alg.dim, depth)
    head, rest = letters[0], letters[1:]
    w_rest = _wick(alg, rest, depth)
    op = p_operator(alg, head, depth) @ w_rest - alg.psi(head) * w_rest
    if rest:
        merged = alg.multiply(head, rest[0])
        op = op - alg.psi(merged) * _wick(alg, rest[1:], depth)
        op = op - _wick(alg, (merged,) + rest[1:], depth)
    return op


def w_pi(
    alg: TracialAlgebra,
    pi: LinearHalfPerm,
    word: Sequence[np.ndarray],
    depth: int,
) -> FockOperator:
    """Generalized Wick product indexed by a linear half-permutation.

    The state is applied to the product over each closed block, and the
    open-block products (points in increasing order, blocks ordered by
    smallest point) form the word of a plain Wick product.
    """
    letters = tuple(np.asarray(w, dtype=complex) for w in word)
    if len(letters) != pi.n:
        raise ValueError(
            f"word length {len(letters)} does not match the diagram size {pi.n}"
        )
    scalar = complex(1.0)
    for block in pi.closed_blocks():
        scalar *= alg.psi(alg.product(letters[p - 1] for p in block))
    opens = sorted((tuple(sorted(b)) for b in pi.opens), key=lambda b: b[0])
    reduced = tuple(alg.product(letters[p - 1] for p in b) for b in opens)
    return scalar * wick(alg, reduced, depth)


# ---------------------------------------------------------------------------
# diagram combinatorics: full NCL, the prepend split, and convolution
# ---------------------------------------------------------------------------


def all_ncl(n: int) -> tuple[LinearHalfPerm, ...]:
    """Every linear half-permutation on [n], all open-block counts."""
    return tuple(
        itertools.chain.from_iterable(enum_ncl(n, k) for k in range(n + 1))
    )


def open_singletons(n: int) -> LinearHalfPerm:
    """The diagram whose blocks are n open singletons."""
    blocks = [(i,) for i in range(1, n + 1)]
    return make_linear(n, blocks, blocks)


def _shift_blocks(pi: LinearHalfPerm, offset: int):
    closed = [tuple(p + offset for p in b) for b in pi.closed_blocks()]
    opens = [
        tuple(p + offset for p in sorted(b)) for b in pi.opens
    ]
    opens.sort(key=lambda b: b[0])
    return closed, opens


def split_images(pi: LinearHalfPerm) -> tuple[LinearHalfPerm, ...]:
    """Images of the prepend split: the ways a new leftmost point joins.

    Returns, in order: the new point as an open singleton; joined to the
    first open block and closed; joined to the first open block and left
    open; the new point as a closed singleton.  The two join cases are
    omitted when the diagram has no open block.
    """
    n = pi.n
    closed, opens = _shift_blocks(pi, 1)
    images = [
        make_linear(n + 1, closed + opens + [(1,)], opens + [(1,)]),
    ]
    if opens:
        first, rest = opens[0], opens[1:]
        joined = (1,) + first
        images.append(make_linear(n + 1, closed + [joined] + rest, rest))
        images.append(
            make_linear(n + 1, closed + [joined] + rest, [joined] + rest)
        )
    images.append(make_linear(n + 1, closed + opens + [(1,)], opens))
    return tuple(images)


def prepend_split_is_bijection(n: int) -> bool:
    """Whether the prepend split hits every diagram on [n+1] exactly once."""
    seen: list[LinearHalfPerm] = []
    for pi in all_ncl(n):
        seen.extend(split_images(pi))
    target = all_ncl(n + 1)
    if len(seen) != len(target):
        return False
    return set(seen) == set(target)


def convolution(
    pi: LinearHalfPerm, sigma: LinearHalfPerm
) -> tuple[LinearHalfPerm, ...]:
    """All merges of two diagrams placed side by side.

    The first entry is the plain concatenation.  The following entries
    join open blocks pairwise — the rightmost open block of the left
    diagram with the leftmost open block of the right — each join
    appearing once left open and once closed before the next pair is
    joined; with j and k open blocks this yields exactly
    2*min(j, k) + 1 diagrams.
    """
    m, n = pi.n, sigma.n
    left_closed, left_open = _shift_blocks(pi, 0)
    right_closed, right_open = _shift_blocks(sigma, m)
    j, k = len(left_open), len(right_open)
    out = [
        make_linear(
            m + n,
            left_closed + left_open + right_closed + right_open,
            left_open + right_open,
        )
    ]
    for r in range(1, min(j, k) + 1):
        joins = [left_open[j - i] + right_open[i - 1] for i in range(1, r + 1)]
        keep_left, keep_right = left_open[: j - r], right_open[r:]
        blocks = left_closed + right_closed + joins + keep_left + keep_right
        out.append(
            make_linear(m + n, blocks, keep_left + [joins[-1]] + keep_right)
        )
        out.append(make_linear(m + n, blocks, keep_left + keep_right))
    return tuple(out)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorCheck:
    """Outcome of one residual check, sized against RESIDUAL_TOL."""

    theorem: str
    instance: str
    max_residual: float
    tolerance: float = RESIDUAL_TOL

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "instance": self.instance,
            "max_residual": self.max_residual,
            "pass": self.passed,
        }

    def __str__(self) -> str:
        mark = "ok" if self.passed else "FAIL"
        return (
            f"{self.theorem} [{self.instance}]: "
            f"residual {self.max_residual:.3e} [{mark}]"
        )


_SCALE_FLOOR = 1e-30


def operator_residual(lhs: FockOperator, rhs: FockOperator) -> float:
    """Relative difference of two operators on their common exact subspace."""
    if (lhs.depth, lhs.dim) != (rhs.depth, rhs.dim):
        raise ValueError("operators live on different spaces")
    degree = min(lhs.exact_input_degree, rhs.exact_input_degree)
    if degree < 0:
        raise ValueError("no exact subspace at this depth cap")
    worst = 0.0
    scale = 0.0
    for x in _basis_vectors(lhs.dim, lhs.depth, degree):
        a, b = lhs(x), rhs(x)
        worst = max(worst, (a - b).norm())
        scale = max(scale, a.norm(), b.norm())
    return worst / max(scale, _SCALE_FLOOR)


def adjoint_residual(
    alg: TracialAlgebra, op: FockOperator, op_star: FockOperator
) -> float:
    """Relative failure of ``op_star`` to be the adjoint of ``op``.

    Compares the two sesquilinear forms over the coordinate tensor-word
    basis of the common exact subspace, with the per-degree Gram matrix
    supplying the inner product.
    """
    degree = min(op.exact_input_degree, op_star.exact_input_degree)
    if degree < 0:
        raise ValueError("no exact subspace at this depth cap")
    cut = _subspace_dim(op.dim, degree)
    basis = list(_basis_vectors(op.dim, op.depth, degree))
    outs = [op(x) for x in basis]
    outs_star = [op_star(x) for x in basis]
    lhs = np.stack([gram_apply(alg, o).flat()[:cut] for o in outs], axis=1)
    via_star = np.stack(
        [gram_apply(alg, o).flat()[:cut] for o in outs_star], axis=1
    )
    diff = np.abs(lhs - via_star.conj().T).max()
    # scale against the full operator outputs, not just the paired window:
    # the forms may legitimately vanish on the subspace while the
    # operators themselves are of order one
    scale = max(
        max(o.norm() for o in outs + outs_star),
        float(np.abs(lhs).max()),
        float(np.abs(via_star).max()),
        _SCALE_FLOOR,
    )
    return float(diff / scale)


def verify_vacuum(
    alg: TracialAlgebra, word: Sequence[np.ndarray], depth: int
) -> OperatorCheck:
    """Defining property: the Wick product maps the vacuum to its word."""
    got = wick(alg, word, depth)(FockVector.vacuum(alg.dim, depth))
    want = FockVector.tensor_word(word, alg.dim, depth)
    residual = (got - want).norm() / max(want.norm(), _SCALE_FLOOR)
    return OperatorCheck(
        "vacuum action", f"{alg.name}, n={len(word)}, L={depth}", residual
    )


def verify_p_adjoint(
    alg: TracialAlgebra, d_el: np.ndarray, depth: int
) -> OperatorCheck:
    residual = adjoint_residual(
        alg,
        p_operator(alg, d_el, depth),
        p_operator(alg, alg.star(d_el), depth),
    )
    return OperatorCheck("p adjoint", f"{alg.name}, L={depth}", residual)


def verify_wick_adjoint(
    alg: TracialAlgebra, word: Sequence[np.ndarray], depth: int
) -> OperatorCheck:
    """Adjoint rule: reverse the word and star each letter."""
    reversed_star = tuple(alg.star(w) for w in reversed(tuple(word)))
    residual = adjoint_residual(
        alg,
        wick(alg, word, depth),
        wick(alg, reversed_star, depth),
    )
    return OperatorCheck(
        "wick adjoint", f"{alg.name}, n={len(tuple(word))}, L={depth}", residual
    )


def verify_decomposition(
    alg: TracialAlgebra, word: Sequence[np.ndarray], depth: int
) -> OperatorCheck:
    """Moment-product expansion: the product of the p operators equals the
    sum of the generalized Wick products over all diagrams."""
    letters = tuple(np.asarray(w, dtype=complex) for w in word)
    n = len(letters)
    if n > depth - 1:
        raise ValueError("need the word at least one shorter than the depth cap")
    lhs = reduce(
        FockOperator.__matmul__, (p_operator(alg, w, depth) for w in letters)
    )
    terms = [w_pi(alg, pi, letters, depth) for pi in all_ncl(n)]
    rhs = reduce(FockOperator.__add__, terms)
    residual = operator_residual(lhs, rhs)
    return OperatorCheck(
        "wick decomposition", f"{alg.name}, n={n}, L={depth}", residual
    )


def verify_prepend(
    alg: TracialAlgebra,
    d0: np.ndarray,
    pi: LinearHalfPerm,
    word: Sequence[np.ndarray],
    depth: int,
) -> OperatorCheck:
    """One step of the decomposition: multiplying a generalized Wick
    product by a new p operator splits over the prepend images."""
    letters = tuple(np.asarray(w, dtype=complex) for w in word)
    lhs = p_operator(alg, d0, depth) @ w_pi(alg, pi, letters, depth)
    extended = (np.asarray(d0, dtype=complex),) + letters
    terms = [w_pi(alg, img, extended, depth) for img in split_images(pi)]
    rhs = reduce(FockOperator.__add__, terms)
    residual = operator_residual(lhs, rhs)
    return OperatorCheck(
        "prepend split", f"{alg.name}, pi={pi}, L={depth}", residual
    )


def verify_product(
    alg: TracialAlgebra,
    pi: LinearHalfPerm,
    word_left: Sequence[np.ndarray],
    sigma: LinearHalfPerm,
    word_right: Sequence[np.ndarray],
    depth: int,
) -> OperatorCheck:
    """Product rule: two generalized Wick products multiply to the sum
    over their convolution, applied to the concatenated word."""
    left = tuple(np.asarray(w, dtype=complex) for w in word_left)
    right = tuple(np.asarray(w, dtype=complex) for w in word_right)
    if len(left) + len(right) > depth - 1:
        raise ValueError(
            "need the combined word at least one shorter than the depth cap"
        )
    lhs = w_pi(alg, pi, left, depth) @ w_pi(alg, sigma, right, depth)
    terms = [
        w_pi(alg, tau, left + right, depth) for tau in convolution(pi, sigma)
    ]
    rhs = reduce(FockOperator.__add__, terms)
    residual = operator_residual(lhs, rhs)
    return OperatorCheck(
        "wick product",
        f"{alg.name}, pi={pi}, sigma={sigma}, L={depth}",
        residual,
    )


def verify_inductive_step(
    alg: TracialAlgebra,
    d_word: Sequence[np.ndarray],
    e_word: Sequence[np.ndarray],
    depth: int,
) -> OperatorCheck:
    """Vector identity driving the product rule: applying a Wick product
    to a tensor word, minus the state-paired shortened application,
    leaves the concatenation plus the boundary-merged word."""
    d_let = tuple(np.asarray(w, dtype=complex) for w in d_word)
    e_let = tuple(np.asarray(w, dtype=complex) for w in e_word)
    if not d_let or not e_let:
        raise ValueError("both words must be nonempty")
    dim = alg.dim
    e_vec = FockVector.tensor_word(e_let, dim, depth)
    e_tail = FockVector.tensor_word(e_let[1:], dim, depth)
    lhs = wick(alg, d_let, depth)(e_vec)
    lhs = lhs - alg.psi(alg.multiply(d_let[-1], e_let[0])) * (
        wick(alg, d_let[:-1], depth)(e_tail)
    )
    merged = d_let[:-1] + (alg.multiply(d_let[-1], e_let[0]),) + e_let[1:]
    rhs = FockVector.tensor_word(d_let + e_let, dim, depth) + (
        FockVector.tensor_word(merged, dim, depth)
    )
    residual = (lhs - rhs).norm() / max(rhs.norm(), _SCALE_FLOOR)
    return OperatorCheck(
        "inductive step",
        f"{alg.name}, m={len(d_let)}, n={len(e_let)}, L={depth}",
        residual,
    )


# ---------------------------------------------------------------------------
# the standard report
# ---------------------------------------------------------------------------


def _convolution_sizes_ok(max_left: int, max_right: int) -> bool:
    for m in range(1, max_left + 1):
        for n in range(1, max_right + 1):
            universe = set(all_ncl(m + n))
            for pi in all_ncl(m):
                for sigma in all_ncl(n):
                    merged = convolution(pi, sigma)
                    expect = 2 * min(pi.k, sigma.k) + 1
                    if len(merged) != expect:
                        return False
                    if len(set(merged)) != expect:
                        return False
                    if not set(merged) <= universe:
                        return False
    return True


def wick_report(
    depth: int = 5,
    seed: int = 0,
    algebras: Sequence[TracialAlgebra] | None = None,
) -> list[OperatorCheck]:
    """Run the standard identity suite and return one check per instance.

    Covers the vacuum action, both adjoint rules, the moment-product
    decomposition with its prepend-split bijection, the product rule on
    a spread of diagram pairs, the inductive vector identity, and the
    convolution size law.
    """
    if algebras is None:
        algebras = (scalar_algebra(), matrix_algebra(), function_algebra())
    rng = np.random.default_rng(seed)
    checks: list[OperatorCheck] = []
    max_word = min(3, depth - 1)
    for alg in algebras:
        letters = [alg.random_element(rng) for _ in range(6)]
        for n in range(1, max_word + 1):
            checks.append(verify_vacuum(alg, letters[:n], depth))
        checks.append(verify_p_adjoint(alg, letters[0], depth))
        for n in range(2, max_word + 1):
            checks.append(verify_wick_adjoint(alg, letters[:n], depth))
        for n in range(1, max_word + 1):
            checks.append(verify_decomposition(alg, letters[:n], depth))
        for pi in (open_singletons(2), make_linear(2, [(1, 2)], [(1, 2)])):
            checks.append(verify_prepend(alg, letters[3], pi, letters[4:6], depth))
        pairs = [
            (open_singletons(1), letters[:1], open_singletons(1), letters[1:2]),
            (open_singletons(2), letters[:2], open_singletons(2), letters[2:4]),
            (
                make_linear(2, [(1, 2)], [(1, 2)]),
                letters[:2],
                make_linear(2, [(1,), (2,)], [(2,)]),
                letters[2:4],
            ),
        ]
        for pi, w1, sigma, w2 in pairs:
            if pi.n + sigma.n <= depth - 1:
                checks.append(verify_product(alg, pi, w1, sigma, w2, depth))
        checks.append(verify_inductive_step(alg, letters[:2], letters[2:4], depth))
    for n in range(1, 4):
        ok = prepend_split_is_bijection(n)
        checks.append(
            OperatorCheck("prepend bijection", f"n={n}", 0.0 if ok else 1.0)
        )
    sizes_ok = _convolution_sizes_ok(2, 2)
    checks.append(
        OperatorCheck(
            "convolution sizes", "m,n <= 2", 0.0 if sizes_ok else 1.0
        )
    )
    return checks
