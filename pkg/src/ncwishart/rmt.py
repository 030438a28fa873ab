"""Monte Carlo estimation of Wishart trace statistics.

Samples complex Wishart matrices X = G*G (G an M-by-N complex Gaussian
matrix with entry variance 1/N), records unnormalized power traces and
the pair cross-traces, and compares empirical means, variances, and
covariances of polynomial trace statistics against their exact limiting
values.  The limits come from the enumeration side of the package: the
covariance of two power traces is the weighted count of annular
non-crossing permutations, polynomial traces in the centered family have
mean (-1)^n c' and variance n c^n, and the alternating two-letter product
is centered with variance c^2.

Sampling is deterministic for a fixed config: each matrix slot gets its
own child of one seed sequence, so statistics are reproducible bit for
bit on a given platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .families import Family, transition_matrix
from .halfperm import WeightRule, weighted_count
from .perms import enum_snc
from .polyc import PolyC

_BATCH = 32


@dataclass(frozen=True)
class EnsembleConfig:
    """Shape, size, and seed of a Wishart sampling run.

    `ratio` is the exact c parameter used in predictions; it defaults to
    rows/cols.  `second_order` is the exact c' parameter, defaulting to
    rows - ratio*cols (zero under the default ratio).  Passing an
    explicit `ratio` models a sequence whose limit differs from the
    finite-size ratio, e.g. rows=205, cols=200 with ratio 1 gives
    second_order 5.
    """

    rows: int
    cols: int
    num_matrices: int = 1
    num_samples: int = 1000
    max_degree: int = 3
    seed: int = 0
    ratio: Fraction | None = None
    second_order: Fraction | None = None

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if self.num_matrices < 1:
            raise ValueError("need at least one matrix")
        if self.num_samples < 2:
            raise ValueError("need at least two samples")
        if self.max_degree < 1:
            raise ValueError("max_degree must be positive")
        if self.ratio is not None and self.ratio <= 0:
            raise ValueError("ratio must be positive")

    @property
    def c(self) -> Fraction:
        return Fraction(self.rows, self.cols) if self.ratio is None else self.ratio

    @property
    def c_prime(self) -> Fraction:
        if self.second_order is not None:
            return self.second_order
        return self.rows - self.c * self.cols


@dataclass
class TraceSamples:
    """Per-sample traces: powers[i, k-1, s] = Tr(X_i^k) for sample s, and
    pair_traces[(i, j)][s] = Tr(X_i X_j) for i < j."""

    config: EnsembleConfig
    powers: np.ndarray
    pair_traces: dict = field(default_factory=dict)


def sample_traces(config: EnsembleConfig) -> TraceSamples:
    """Run the Monte Carlo and collect trace statistics."""
    m, n, p = config.rows, config.cols, config.num_matrices
    total = config.num_samples
    deg = config.max_degree
    root = np.random.SeedSequence(config.seed)
    gens = [np.random.default_rng(child) for child in root.spawn(p)]

    powers = np.empty((p, deg, total))
    pairs = {
        (i, j): np.empty(total) for i in range(p) for j in range(i + 1, p)
    }
    scale = math.sqrt(2 * n)

    done = 0
    while done < total:
        b = min(_BATCH, total - done)
        sl = slice(done, done + b)
        mats = []
        for i in range(p):
            re = gens[i].standard_normal((b, m, n))
            im = gens[i].standard_normal((b, m, n))
            g = (re + 1j * im) / scale
            a = np.matmul(g.conj().transpose(0, 2, 1), g)
            mats.append(a)
            acc = a
            powers[i, 0, sl] = np.einsum("bii->b", a).real
            for k in range(1, deg):
                acc = np.matmul(acc, a)
                powers[i, k, sl] = np.einsum("bii->b", acc).real
        for (i, j), out in pairs.items():
            out[sl] = np.einsum("bij,bji->b", mats[i], mats[j]).real
        done += b
    return TraceSamples(config=config, powers=powers, pair_traces=pairs)


# ---------------------------------------------------------------------------
# per-sample statistics
# ---------------------------------------------------------------------------


def power_trace(samples: TraceSamples, i: int, k: int) -> np.ndarray:
    """Tr(X_i^k) for every sample."""
    if not 1 <= k <= samples.config.max_degree:
        raise ValueError(f"power {k} was not sampled")
    return samples.powers[i, k - 1]


def polynomial_trace(
    samples: TraceSamples, family: Family, n: int, i: int
) -> np.ndarray:
    """Tr(f_n(X_i)) for every sample, f_n the degree-n polynomial of the
    family evaluated with the config's exact c parameter."""
    cfg = samples.config
    if n > cfg.max_degree:
        raise ValueError(f"degree {n} exceeds sampled max {cfg.max_degree}")
    coeffs = transition_matrix(family, n + 1)
    c = cfg.c
    out = np.full(
        cfg.num_samples, float(coeffs.entry(n, 0).evaluate(c)) * cfg.cols
    )
    for k in range(1, n + 1):
        w = float(coeffs.entry(n, k).evaluate(c))
        if w:
            out = out + w * power_trace(samples, i, k)
    return out


def pi_pair_trace(samples: TraceSamples, i: int = 0, j: int = 1) -> np.ndarray:
    """Tr(f_1(X_i) f_1(X_j)) for every sample, f_1 = x - c the degree-one
    centered polynomial: the shortest alternating product statistic."""
    if i == j:
        raise ValueError("the two letters must differ")
    cfg = samples.config
    a, b = min(i, j), max(i, j)
    cross = samples.pair_traces[(a, b)]
    c = float(cfg.c)
    return (
        cross
        - c * power_trace(samples, i, 1)
        - c * power_trace(samples, j, 1)
        + c * c * cfg.cols
    )


# ---------------------------------------------------------------------------
# exact limits
# ---------------------------------------------------------------------------


def predict_covariance(m: int, n: int) -> PolyC:
    """Limiting covariance of Tr(X^m) and Tr(X^n) as a polynomial in c:
    the weighted count of annular non-crossing permutations."""
    return weighted_count(enum_snc(m, n), WeightRule.ALL_BLOCKS)


def centered_trace_mean_limit(n: int, c: Fraction, c_prime: Fraction) -> Fraction:
    """Limit of E Tr(g_n(X)) for the centered first-kind family."""
    if n < 1:
        raise ValueError("degree must be positive")
    return (-1) ** n * c_prime


def centered_trace_covariance_limit(
    m: int, i: int, n: int, j: int, c: Fraction
) -> Fraction:
    """Limit of the covariance of Tr(g_m(X_i)) and Tr(g_n(X_j))."""
    if m < 1 or n < 1:
        raise ValueError("degrees must be positive")
    if i != j or m != n:
        return Fraction(0)
    return n * c**n


def second_kind_trace_mean_limit(
    n: int, c: Fraction, c_prime: Fraction
) -> Fraction:
    """Limit of E Tr(f_n(X)) for the second-kind family: zero in even
    degree, c' c^k in degree 2k+1."""
    if n < 1:
        raise ValueError("degree must be positive")
    if n % 2 == 0:
        return Fraction(0)
    return c_prime * c ** ((n - 1) // 2)


def cyclic_symmetry_count(m_vec, i_vec) -> int:
    """Number of cyclic shifts fixing the word (its limiting variance is
    this count times c to the total degree)."""
    k = len(m_vec)
    if k != len(i_vec):
        raise ValueError("need one letter per degree")
    word = list(zip(m_vec, i_vec))
    return sum(1 for s in range(1, k + 1) if word == word[s:] + word[:s])


def word_variance_limit(m_vec, i_vec, c: Fraction) -> Fraction:
    """Limiting variance of the alternating-product trace statistic."""
    return cyclic_symmetry_count(m_vec, i_vec) * c ** sum(m_vec)


# ---------------------------------------------------------------------------
# estimation checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StatCheck:
    """One estimated statistic held against its exact limit.

    `kind` says which estimator produced it (mean/variance/covariance) and
    `keys` names the underlying statistic(s), so reports can be regrouped
    without parsing the display name.
    """

    name: str
    estimate: float
    limit: float
    tolerance: float
    se: float = 0.0
    kind: str = "stat"
    keys: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return abs(self.estimate - self.limit) <= self.tolerance

    def __str__(self) -> str:
        verdict = "ok" if self.passed else "FAIL"
        return (
            f"{self.name}: estimate {self.estimate:.6g}, "
            f"limit {self.limit:.6g}, tolerance {self.tolerance:.3g} "
            f"[{verdict}]"
        )


def tolerance_band(se: float, limit: float, cols: int) -> float:
    """Three standard errors plus a 10/N finite-size allowance scaled by
    the limit's magnitude."""
    return 3.0 * se + 10.0 / cols * (1.0 + abs(limit))


def mean_check(
    values: np.ndarray, limit: float, cols: int, name: str, keys=()
) -> StatCheck:
    s = len(values)
    est = float(np.mean(values))
    se = float(np.std(values, ddof=1)) / math.sqrt(s)
    return StatCheck(
        name, est, limit, tolerance_band(se, limit, cols), se, "mean", tuple(keys)
    )


def variance_check(
    values: np.ndarray, limit: float, cols: int, name: str, keys=()
) -> StatCheck:
    s = len(values)
    centered = values - np.mean(values)
    est = float(np.sum(centered**2) / (s - 1))
    se = float(np.std(centered**2, ddof=1)) / math.sqrt(s)
    return StatCheck(
        name, est, limit, tolerance_band(se, limit, cols), se, "variance", tuple(keys)
    )


def covariance_check(
    x: np.ndarray, y: np.ndarray, limit: float, cols: int, name: str, keys=()
) -> StatCheck:
    s = len(x)
    prod = (x - np.mean(x)) * (y - np.mean(y))
    est = float(np.sum(prod) / (s - 1))
    se = float(np.std(prod, ddof=1)) / math.sqrt(s)
    return StatCheck(
        name, est, limit, tolerance_band(se, limit, cols), se, "covariance", tuple(keys)
    )


def evaluate_statistics(
    config: EnsembleConfig, samples: TraceSamples | None = None
) -> list[StatCheck]:
    """The full estimator suite for a sampling run.

    Checks, for every matrix and degree up to the config's max: the mean
    and variance of the centered first-kind trace, the mean of the
    second-kind trace, all pairwise covariances among the first-kind
    traces, the variance of the two-letter alternating product (when at
    least two matrices are sampled), and the covariance of plain power
    traces against the annular enumeration.
    """
    if samples is None:
        samples = sample_traces(config)
    c, c_prime = config.c, config.c_prime
    cols = config.cols
    checks: list[StatCheck] = []

    gamma_traces = {
        (n, i): polynomial_trace(samples, Family.GAMMA, n, i)
        for i in range(config.num_matrices)
        for n in range(1, config.max_degree + 1)
    }
    for (n, i), values in gamma_traces.items():
        limit = float(centered_trace_mean_limit(n, c, c_prime))
        key = f"tr gamma[{n}](X{i + 1})"
        checks.append(mean_check(values, limit, cols, f"mean {key}", (key,)))
    for (n, i) in gamma_traces:
        values = polynomial_trace(samples, Family.PI, n, i)
        limit = float(second_kind_trace_mean_limit(n, c, c_prime))
        key = f"tr pi[{n}](X{i + 1})"
        checks.append(mean_check(values, limit, cols, f"mean {key}", (key,)))
    for (n, i), values in gamma_traces.items():
        limit = float(centered_trace_covariance_limit(n, i, n, i, c))
        key = f"tr gamma[{n}](X{i + 1})"
        checks.append(
            variance_check(values, limit, cols, f"var {key}", (key, key))
        )
    keys = sorted(gamma_traces)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            (n1, i1), (n2, i2) = keys[a], keys[b]
            limit = float(centered_trace_covariance_limit(n1, i1, n2, i2, c))
            key_a = f"tr gamma[{n1}](X{i1 + 1})"
            key_b = f"tr gamma[{n2}](X{i2 + 1})"
            checks.append(
                covariance_check(
                    gamma_traces[keys[a]],
                    gamma_traces[keys[b]],
                    limit,
                    cols,
                    f"cov {key_a}, {key_b}",
                    (key_a, key_b),
                )
            )

    if config.num_matrices >= 2:
        s_values = pi_pair_trace(samples, 0, 1)
        limit = float(word_variance_limit((1, 1), (1, 2), c))
        key = "tr pi[1](X1) pi[1](X2)"
        checks.append(
            variance_check(s_values, limit, cols, f"var {key}", (key, key))
        )

    for m in range(1, config.max_degree + 1):
        for n in range(m, config.max_degree + 1):
            limit = float(predict_covariance(m, n).evaluate(c))
            key_a, key_b = f"tr X1^{m}", f"tr X1^{n}"
            checks.append(
                covariance_check(
                    power_trace(samples, 0, m),
                    power_trace(samples, 0, n),
                    limit,
                    cols,
                    f"cov {key_a}, {key_b}",
                    (key_a, key_b),
                )
            )
    return checks
