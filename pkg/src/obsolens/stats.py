"""Numeric procedures: per-million normalization, Kendall tau-b with exact
permutation p-values, decade delta tables, genre extrapolation, reproducible
sampling, and the sample-based purposive-frequency estimator.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence, TypeVar

from .corpus import Decade

EXACT_P_MAX_N = 30

T = TypeVar("T")


class StatsError(Exception):
    pass


class ZeroDenominator(StatsError):
    pass


class ZeroShare(StatsError):
    pass


class TooFewPoints(StatsError):
    pass


class NonConsecutiveDecades(StatsError):
    pass


class EmptyMatchSet(StatsError):
    pass


@dataclass(frozen=True)
class FrequencyPoint:
    decade: Decade
    count: int
    token_total: int
    pmw: float

    def __post_init__(self):
        if self.token_total > 0:
            expected = self.count / self.token_total * 1e6
            if not math.isclose(self.pmw, expected, rel_tol=1e-12, abs_tol=1e-12):
                raise ValueError(
                    f"pmw {self.pmw} inconsistent with {self.count}/{self.token_total}"
                )


@dataclass(frozen=True)
class FrequencySeries:
    label: str
    points: tuple[FrequencyPoint, ...]

    def __post_init__(self):
        decades = [p.decade.start_year for p in self.points]
        if any(b <= a for a, b in zip(decades, decades[1:])):
            raise ValueError("decades must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def pmw_values(self) -> tuple[float, ...]:
        return tuple(p.pmw for p in self.points)

    @property
    def decades(self) -> tuple[Decade, ...]:
        return tuple(p.decade for p in self.points)


@dataclass(frozen=True)
class TrendResult:
    tau: float
    p_value: float
    n: int
    s_statistic: int
    method: str  # "exact" or "normal_approx"


@dataclass(frozen=True)
class DeltaTable:
    rows: tuple[tuple[Decade, Decade, float], ...]
    total: float


@dataclass(frozen=True)
class PurposiveEstimate:
    decade: Decade
    sample_size: int
    k_purposive: int
    total_pmw: float
    purposive_pmw: float
    non_purposive_pmw: float


def per_million(count: int, token_total: int) -> float:
    """Normalize an occurrence count to per-million-words."""
    if token_total <= 0:
        raise ZeroDenominator("token_total must be positive")
    return count / token_total * 1e6


def make_point(decade: Decade, count: int, token_total: int) -> FrequencyPoint:
    return FrequencyPoint(decade, count, token_total, per_million(count, token_total))


def inversion_counts(n: int) -> list[int]:
    """Number of permutations of n elements with k inversions, for k = 0..n(n-1)/2.

    Computed by the recurrence T(n,k) = sum_{j=0..min(k,n-1)} T(n-1, k-j),
    evaluated with running prefix sums. Exact integers.
    """
    counts = [1]
    for m in range(2, n + 1):
        prev = counts
        size = len(prev) + m - 1
        out = [0] * size
        running = 0
        for k in range(size):
            running += prev[k] if k < len(prev) else 0
            if k - m >= 0:
                running -= prev[k - m]
            out[k] = running
        counts = out
    return counts


def exact_p_value(n: int, s_statistic: int) -> float:
    """Two-sided exact tail probability of |S| >= |s| under the uniform-
    permutation null, from the inversion-count distribution.
    """
    if n < 2:
        raise StatsError("need at least 2 observations")
    n_pairs = n * (n - 1) // 2
    if abs(s_statistic) > n_pairs:
        raise StatsError(f"|s| = {abs(s_statistic)} exceeds n(n-1)/2 = {n_pairs}")
    # S = n_pairs - 2 * inversions, so |S| >= |s| iff inversions <= (n_pairs-|s|)/2
    # or, symmetrically, inversions >= (n_pairs+|s|)/2.
    m = (n_pairs - abs(s_statistic)) // 2
    counts = inversion_counts(n)
    tail = sum(counts[: m + 1])
    p = 2 * tail / math.factorial(n)
    return min(p, 1.0)


def _kendall_s(xs: Sequence[float], ys: Sequence[float]) -> int:
    s = 0
    n = len(xs)
    for i in range(n):
        for j in range(i + 1, n):
            dx = (xs[j] > xs[i]) - (xs[j] < xs[i])
            dy = (ys[j] > ys[i]) - (ys[j] < ys[i])
            s += dx * dy
    return s


def _tie_sizes(values: Sequence[float]) -> list[int]:
    return [c for c in Counter(values).values() if c > 1]


def kendall_tau(xs: Sequence[float], ys: Sequence[float]) -> TrendResult:
    """Kendall tau-b between two paired sequences.

    P-value is exact (permutation null) when neither sequence has ties and
    n <= 30; otherwise a tie-corrected normal approximation, no continuity
    correction.
    """
    if len(xs) != len(ys):
        raise StatsError("sequences must be the same length")
    n = len(xs)
    if n < 2:
        raise TooFewPoints("need at least 2 paired observations")
    s = _kendall_s(xs, ys)
    n_pairs = n * (n - 1) // 2
    x_ties = _tie_sizes(xs)
    y_ties = _tie_sizes(ys)
    tx = sum(t * (t - 1) // 2 for t in x_ties)
    ty = sum(t * (t - 1) // 2 for t in y_ties)
    denom = math.sqrt((n_pairs - tx) * (n_pairs - ty))
    if denom == 0:
        return TrendResult(tau=0.0, p_value=1.0, n=n, s_statistic=s, method="normal_approx")
    tau = s / denom
    if not x_ties and not y_ties and n <= EXACT_P_MAX_N:
        return TrendResult(tau=tau, p_value=exact_p_value(n, s), n=n,
                           s_statistic=s, method="exact")
    v0 = n * (n - 1) * (2 * n + 5)
    vt = sum(t * (t - 1) * (2 * t + 5) for t in x_ties)
    vu = sum(t * (t - 1) * (2 * t + 5) for t in y_ties)
    v1 = (sum(t * (t - 1) for t in x_ties) * sum(t * (t - 1) for t in y_ties)) / (
        2 * n * (n - 1)
    )
    v2 = 0.0
    if n > 2:
        v2 = (
            sum(t * (t - 1) * (t - 2) for t in x_ties)
            * sum(t * (t - 1) * (t - 2) for t in y_ties)
        ) / (9 * n * (n - 1) * (n - 2))
    var = (v0 - vt - vu) / 18 + v1 + v2
    if var <= 0:
        return TrendResult(tau=tau, p_value=1.0, n=n, s_statistic=s, method="normal_approx")
    z = s / math.sqrt(var)
    p = math.erfc(abs(z) / math.sqrt(2))
    return TrendResult(tau=tau, p_value=p, n=n, s_statistic=s, method="normal_approx")


def kendall_trend(series: FrequencySeries) -> TrendResult:
    """Kendall tau-b of decade order against pmw values."""
    if len(series) < 3:
        raise TooFewPoints(f"need >= 3 points, got {len(series)}")
    xs = [float(p.decade.start_year) for p in series.points]
    ys = [p.pmw for p in series.points]
    return kendall_tau(xs, ys)


def delta_table(series: FrequencySeries) -> DeltaTable:
    """Decade-to-decade pmw gains and losses, plus the overall total."""
    if len(series) < 2:
        raise TooFewPoints("need >= 2 points")
    for a, b in zip(series.points, series.points[1:]):
        if b.decade.start_year - a.decade.start_year != 10:
            raise NonConsecutiveDecades(
                f"{a.decade} -> {b.decade} is not a single decade step"
            )
    rows = tuple(
        (a.decade, b.decade, b.pmw - a.pmw)
        for a, b in zip(series.points, series.points[1:])
    )
    total = series.points[-1].pmw - series.points[0].pmw
    return DeltaTable(rows=rows, total=total)


def reconstruct_from_deltas(
    label: str, start_decade: Decade, baseline_pmw: float, deltas: Sequence[float]
) -> FrequencySeries:
    """Cumulative-sum inverse of delta_table: baseline plus running deltas."""
    points = [FrequencyPoint(start_decade, 0, 0, baseline_pmw)]
    value = baseline_pmw
    year = start_decade.start_year
    for d in deltas:
        year += 10
        value += d
        points.append(FrequencyPoint(Decade(year), 0, 0, value))
    return FrequencySeries(label, tuple(points))


def extrapolate(pmw: float, share: float) -> float:
    """Rescale a genre frequency as if the genre were 25% of the corpus."""
    if share <= 0:
        raise ZeroShare("genre share must be positive")
    if share > 1:
        raise StatsError("genre share cannot exceed 1")
    return pmw * 0.25 / share


class Xorshift64Star:
    """Small deterministic 64-bit shift-register generator for sampling.

    Platform-independent by construction, so published sample draws replay
    exactly from the recorded seed.
    """

    MASK = (1 << 64) - 1
    MULT = 2685821657736338717

    def __init__(self, seed: int):
        # splitmix64 step spreads weak seeds and avoids the forbidden zero state
        z = (seed + 0x9E3779B97F4A7C15) & self.MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        self._state = (z ^ (z >> 31)) or 1

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & self.MASK
        x ^= x >> 27
        self._state = x
        return (x * self.MULT) & self.MASK

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n


def draw_sample(items: Sequence[T], n: int, seed: int) -> list[T]:
    """Uniform sample of n items without replacement, deterministic per seed.

    Returns the whole sequence (in order) when n >= len(items).
    """
    if not items:
        raise EmptyMatchSet("cannot sample from an empty match set")
    if n < 1:
        raise StatsError("sample size must be >= 1")
    if n >= len(items):
        return list(items)
    rng = Xorshift64Star(seed)
    pool = list(items)
    # partial Fisher-Yates: the first n slots end up a uniform sample
    for i in range(n):
        j = i + rng.randbelow(len(pool) - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:n]


def estimate_purposive(
    decade: Decade, total_pmw: float, k: int, n: int
) -> PurposiveEstimate:
    """Split a total pmw into purposive / non-purposive parts by sample proportion."""
    if n <= 0:
        raise StatsError("sample size must be positive")
    if not 0 <= k <= n:
        raise StatsError(f"k = {k} outside [0, {n}]")
    purposive = total_pmw * k / n
    return PurposiveEstimate(
        decade=decade,
        sample_size=n,
        k_purposive=k,
        total_pmw=total_pmw,
        purposive_pmw=purposive,
        non_purposive_pmw=total_pmw * (n - k) / n,
    )


def write_series_csv(series: FrequencySeries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["decade", "count", "token_total", "pmw"])
    for p in series.points:
        writer.writerow([p.decade.start_year, p.count, p.token_total, repr(p.pmw)])
    return buf.getvalue()


def read_series_csv(text: str, label: str = "") -> FrequencySeries:
    """Read the decade,count,token_total,pmw format. A zero token_total row
    means the pmw column is authoritative (externally supplied frequency).
    """
    reader = csv.DictReader(io.StringIO(text))
    required = {"decade", "count", "token_total", "pmw"}
    if reader.fieldnames is None or not required <= set(reader.fieldnames):
        raise StatsError(f"series CSV must have columns {sorted(required)}")
    points = []
    for row in reader:
        decade = Decade(int(row["decade"]))
        count = int(row["count"] or 0)
        token_total = int(row["token_total"] or 0)
        if row["pmw"]:
            pmw = float(row["pmw"])
        else:
            pmw = per_million(count, token_total)
        points.append(FrequencyPoint(decade, count, token_total, pmw))
    return FrequencySeries(label, tuple(points))


def sum_series(label: str, series_list: Iterable[FrequencySeries]) -> FrequencySeries:
    """Pointwise sum of series over identical decade axes (multi-pattern totals)."""
    series_list = list(series_list)
    if not series_list:
        raise StatsError("no series to sum")
    axes = {s.decades for s in series_list}
    if len(axes) != 1:
        raise StatsError("series must share one decade axis")
    points = []
    for i, decade in enumerate(series_list[0].decades):
        count = sum(s.points[i].count for s in series_list)
        token_total = series_list[0].points[i].token_total
        pmw = sum(s.points[i].pmw for s in series_list)
        points.append(FrequencyPoint(decade, count, token_total, pmw))
    return FrequencySeries(label, tuple(points))
