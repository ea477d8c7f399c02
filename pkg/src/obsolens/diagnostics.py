"""Obsolescence symptom battery: declining-trend test, genre fragmentation,
paradigmatic atrophy, competitor analysis, and the compiled verdict report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .corpus import Decade
from .index import CorpusIndex, GenreShareTable
from .query import Match
from .stats import (
    FrequencyPoint,
    FrequencySeries,
    TooFewPoints,
    TrendResult,
    ZeroShare,
    extrapolate,
    kendall_tau,
    kendall_trend,
)

REPORT_SCHEMA_VERSION = 1

DEFAULT_PUNCTUATION_TAGS = frozenset({"y", "punc", "pun", "."})


class DiagnosticsError(Exception):
    pass


class TooFewGenres(DiagnosticsError):
    pass


class RangeMismatch(DiagnosticsError):
    pass


class MissingFinding(DiagnosticsError):
    pass


class Symptom(str, Enum):
    NEGATIVE_CORRELATION = "NegativeCorrelation"
    DISTRIBUTIONAL_FRAGMENTATION = "DistributionalFragmentation"
    PARADIGMATIC_ATROPHY = "ParadigmaticAtrophy"


class Position(str, Enum):
    INITIAL = "Initial"
    NON_INITIAL = "NonInitial"


class CompetitorVerdict(str, Enum):
    MIRROR_DETECTED = "mirror_detected"
    INSUFFICIENT_GAIN = "insufficient_gain"
    COMPETITOR_ALSO_DECLINING = "competitor_also_declining"


class Verdict(str, Enum):
    OBSOLESCENT_LIKELY = "OBSOLESCENT_LIKELY"
    DECLINING_ONLY = "DECLINING_ONLY"
    NO_EVIDENCE = "NO_EVIDENCE"


@dataclass(frozen=True)
class DiagnosticsConfig:
    alpha: float = 0.05
    negation_window: int = 6
    fragmentation_min_genres: int = 3
    position_rule: str = "sentence_initial"
    coverage_ratio_threshold: float = 0.5
    punctuation_tags: frozenset[str] = DEFAULT_PUNCTUATION_TAGS

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if self.negation_window < 1:
            raise ValueError("negation_window must be >= 1")


@dataclass(frozen=True)
class SymptomFinding:
    symptom: Symptom
    detected: bool
    evidence: dict
    narrative: str


@dataclass(frozen=True)
class CompetitorFinding:
    competitor_label: str
    trend: TrendResult
    total_gain: float
    delta_mirror_tau: float
    coverage_ratio: float
    verdict: CompetitorVerdict


@dataclass(frozen=True)
class SymptomReport:
    target_label: str
    findings: tuple[SymptomFinding, SymptomFinding, SymptomFinding]
    competitors: tuple[CompetitorFinding, ...]
    verdict: Verdict
    metadata: dict = field(default_factory=dict)


def _trend_dict(trend: TrendResult) -> dict:
    return {
        "tau": trend.tau,
        "p_value": trend.p_value,
        "n": trend.n,
        "s_statistic": trend.s_statistic,
        "method": trend.method,
    }


def _series_dict(series: FrequencySeries) -> list[dict]:
    return [
        {"decade": p.decade.start_year, "count": p.count,
         "token_total": p.token_total, "pmw": p.pmw}
        for p in series.points
    ]


def check_negative_correlation(
    series: FrequencySeries, config: DiagnosticsConfig
) -> SymptomFinding:
    """Symptom 1, the necessary condition: significant negative trend over time."""
    trend = kendall_trend(series)
    detected = trend.tau < 0 and trend.p_value < config.alpha
    if detected:
        narrative = (
            f"Significant negative correlation between decade and frequency "
            f"(tau = {trend.tau:.7f}, p = {trend.p_value:.3e}): the later the "
            f"decade, the fewer instances."
        )
    else:
        narrative = (
            f"No significant negative trend (tau = {trend.tau:.4f}, "
            f"p = {trend.p_value:.3e})."
        )
    return SymptomFinding(
        symptom=Symptom.NEGATIVE_CORRELATION,
        detected=detected,
        evidence={"trend": _trend_dict(trend), "series": _series_dict(series)},
        narrative=narrative,
    )


def extrapolate_series(
    series: FrequencySeries, genre: str, shares: GenreShareTable
) -> tuple[FrequencySeries, list[int]]:
    """Pointwise genre extrapolation; zero-share decades are skipped and
    returned so callers can note them in evidence.
    """
    points = []
    skipped: list[int] = []
    for p in series.points:
        share = shares.share(p.decade, genre)
        if share <= 0:
            skipped.append(p.decade.start_year)
            continue
        points.append(FrequencyPoint(p.decade, 0, 0, extrapolate(p.pmw, share)))
    return FrequencySeries(series.label, tuple(points)), skipped


def check_fragmentation(
    per_genre_series: Mapping[str, FrequencySeries],
    shares: GenreShareTable,
    config: DiagnosticsConfig,
) -> SymptomFinding:
    """Symptom 2: after equal-share extrapolation, the construction concentrates
    in some genre (significant rise) while receding from another (significant fall).
    """
    usable = {g: s for g, s in per_genre_series.items() if len(s) >= 3}
    if len(usable) < config.fragmentation_min_genres:
        raise TooFewGenres(
            f"need >= {config.fragmentation_min_genres} genres with >= 3 points, "
            f"got {len(usable)}"
        )
    per_genre: dict[str, dict] = {}
    rising: list[str] = []
    falling: list[str] = []
    for genre in sorted(usable):
        extrapolated, skipped = extrapolate_series(usable[genre], genre, shares)
        if len(extrapolated) < 3:
            per_genre[genre] = {"skipped_decades": skipped, "trend": None}
            continue
        trend = kendall_trend(extrapolated)
        significant = trend.p_value < config.alpha
        if significant and trend.tau > 0:
            rising.append(genre)
        if significant and trend.tau < 0:
            falling.append(genre)
        per_genre[genre] = {
            "trend": _trend_dict(trend),
            "extrapolated_series": _series_dict(extrapolated),
            "skipped_decades": skipped,
        }
    detected = bool(rising) and bool(falling)
    if detected:
        narrative = (
            f"Distributional fragmentation: extrapolated frequency rises "
            f"significantly in {', '.join(rising)} while falling in "
            f"{', '.join(falling)} (significance-based rule; stricter than "
            f"visual inspection and may disagree at the margin)."
        )
    else:
        narrative = (
            "No opposing significant genre trends after extrapolation; no "
            "evidence of increasing genre restriction."
        )
    return SymptomFinding(
        symptom=Symptom.DISTRIBUTIONAL_FRAGMENTATION,
        detected=detected,
        evidence={"per_genre": per_genre, "rising": rising, "falling": falling},
        narrative=narrative,
    )


def classify_position(
    index: CorpusIndex, match: Match, config: DiagnosticsConfig | None = None
) -> Position:
    """Initial iff the match starts at the first non-punctuation token of its
    sentence. Medial positions count as NonInitial.
    """
    config = config or DiagnosticsConfig()
    if match.start == 0:
        return Position.INITIAL
    sentence = index.documents[match.doc_no].sentences[match.sentence_no]
    for token in sentence.tokens[: match.start]:
        if token.pos.casefold() not in config.punctuation_tags:
            return Position.NON_INITIAL
    return Position.INITIAL


def is_negated(index: CorpusIndex, match: Match, config: DiagnosticsConfig) -> bool:
    """Surface negation check: "not"/"n't" within the window after the match."""
    sentence = index.documents[match.doc_no].sentences[match.sentence_no]
    window = sentence.tokens[match.end + 1 : match.end + 1 + config.negation_window]
    return any(tok.norm in ("not", "n't") for tok in window)


def _proportion_series(values: Mapping[Decade, float]) -> FrequencySeries:
    points = tuple(
        FrequencyPoint(d, 0, 0, values[d])
        for d in sorted(values, key=lambda d: d.start_year)
    )
    return FrequencySeries("proportion", points)


def check_atrophy(
    index: CorpusIndex,
    matches: Sequence[Match],
    config: DiagnosticsConfig,
) -> SymptomFinding:
    """Symptom 3: loss of a positional or negated variant.

    Sub-check (a): trend of the per-decade share of sentence-initial matches;
    a significant trend means the mix is heading toward one variant only.
    Sub-check (b): trend of negated-match pmw; atrophy requires the negated
    forms to decline more steeply than the construction overall, otherwise the
    decline is just the overall trend showing through.
    """
    from .index import token_totals
    from .query import frequency_series

    if not matches:
        raise TooFewPoints("empty match set")
    by_decade: dict[Decade, list[Match]] = {}
    for match in matches:
        by_decade.setdefault(match.decade, []).append(match)
    if len(by_decade) < 3:
        raise TooFewPoints(f"need >= 3 decades of matches, got {len(by_decade)}")

    initial_share = {
        decade: sum(
            classify_position(index, m, config) is Position.INITIAL for m in ms
        ) / len(ms)
        for decade, ms in by_decade.items()
    }
    position_series = _proportion_series(initial_share)
    position_trend = kendall_trend(position_series)
    position_detected = position_trend.p_value < config.alpha

    negated = [m for m in matches if is_negated(index, m, config)]
    negated_series = frequency_series(negated, index, label="negated")
    overall_series = frequency_series(matches, index, label="all")
    negated_trend = kendall_trend(negated_series)
    overall_trend = kendall_trend(overall_series)
    negation_detected = (
        negated_trend.tau < 0
        and negated_trend.p_value < config.alpha
        and negated_trend.tau < overall_trend.tau
    )

    detected = position_detected or negation_detected
    parts = []
    if position_detected:
        parts.append(
            f"initial-position share trends significantly "
            f"(tau = {position_trend.tau:.3f}, p = {position_trend.p_value:.3e})"
        )
    if negation_detected:
        parts.append(
            f"negated forms decline more steeply than the construction overall "
            f"(tau = {negated_trend.tau:.3f} vs {overall_trend.tau:.3f})"
        )
    narrative = (
        "Paradigmatic atrophy: " + "; ".join(parts) + "."
        if detected
        else "No signs of paradigmatic atrophy: position mix and negated forms "
             "are stable relative to the overall trend."
    )
    return SymptomFinding(
        symptom=Symptom.PARADIGMATIC_ATROPHY,
        detected=detected,
        evidence={
            "position_share_series": _series_dict(position_series),
            "position_trend": _trend_dict(position_trend),
            "negated_series": _series_dict(negated_series),
            "negated_trend": _trend_dict(negated_trend),
            "overall_trend": _trend_dict(overall_trend),
        },
        narrative=narrative,
    )


def _aligned_deltas(series: FrequencySeries, decades: Sequence[Decade]) -> list[float]:
    by_decade = {p.decade: p.pmw for p in series.points}
    values = [by_decade[d] for d in decades]
    return [b - a for a, b in zip(values, values[1:])]


def competitor_mirror(
    target: FrequencySeries, competitor: FrequencySeries, config: DiagnosticsConfig
) -> CompetitorFinding:
    """Does the competitor's gain mirror the target's loss?

    The two series must span the same period; the competitor may be sampled
    more coarsely (deltas are compared over the shared decades).
    """
    target_loss = target.points[-1].pmw - target.points[0].pmw
    if target_loss >= 0:
        raise DiagnosticsError("target series shows no overall loss")
    shared = sorted(
        set(target.decades) & set(competitor.decades), key=lambda d: d.start_year
    )
    if (
        len(shared) < 2
        or target.decades[0] != competitor.decades[0]
        or target.decades[-1] != competitor.decades[-1]
    ):
        raise RangeMismatch("target and competitor must span the same decade range")

    trend = kendall_trend(competitor)
    total_gain = competitor.points[-1].pmw - competitor.points[0].pmw
    target_deltas = _aligned_deltas(target, shared)
    competitor_deltas = _aligned_deltas(competitor, shared)
    if len(target_deltas) >= 2:
        delta_mirror_tau = kendall_tau(target_deltas, competitor_deltas).tau
    else:
        delta_mirror_tau = 0.0
    coverage_ratio = total_gain / abs(target_loss)

    # a perfectly ordered short series (tau = 1) counts as a positive trend even
    # when n is too small for any p to clear alpha
    significant_positive = trend.tau > 0 and (
        trend.p_value < config.alpha or trend.tau == 1.0
    )
    if total_gain <= 0:
        verdict = CompetitorVerdict.COMPETITOR_ALSO_DECLINING
    elif significant_positive and coverage_ratio >= config.coverage_ratio_threshold:
        verdict = CompetitorVerdict.MIRROR_DETECTED
    else:
        verdict = CompetitorVerdict.INSUFFICIENT_GAIN
    return CompetitorFinding(
        competitor_label=competitor.label,
        trend=trend,
        total_gain=total_gain,
        delta_mirror_tau=delta_mirror_tau,
        coverage_ratio=coverage_ratio,
        verdict=verdict,
    )


def compile_report(
    target_label: str,
    findings: Iterable[SymptomFinding],
    competitors: Iterable[CompetitorFinding] = (),
    metadata: Mapping | None = None,
) -> SymptomReport:
    """Assemble the three symptom findings into a verdict report."""
    by_symptom = {f.symptom: f for f in findings}
    missing = set(Symptom) - by_symptom.keys()
    if missing:
        raise MissingFinding(f"missing findings: {sorted(s.value for s in missing)}")
    s1 = by_symptom[Symptom.NEGATIVE_CORRELATION]
    others = [
        by_symptom[Symptom.DISTRIBUTIONAL_FRAGMENTATION],
        by_symptom[Symptom.PARADIGMATIC_ATROPHY],
    ]
    if s1.detected and any(f.detected for f in others):
        verdict = Verdict.OBSOLESCENT_LIKELY
    elif s1.detected:
        verdict = Verdict.DECLINING_ONLY
    else:
        verdict = Verdict.NO_EVIDENCE
    ordered = (s1, others[0], others[1])
    return SymptomReport(
        target_label=target_label,
        findings=ordered,
        competitors=tuple(competitors),
        verdict=verdict,
        metadata=dict(metadata or {}),
    )


def report_to_dict(report: SymptomReport, config: DiagnosticsConfig) -> dict:
    return {
        "version": REPORT_SCHEMA_VERSION,
        "target": report.target_label,
        "config": {
            "alpha": config.alpha,
            "negation_window": config.negation_window,
            "fragmentation_min_genres": config.fragmentation_min_genres,
            "position_rule": config.position_rule,
            "coverage_ratio_threshold": config.coverage_ratio_threshold,
            "punctuation_tags": sorted(config.punctuation_tags),
        },
        "findings": [
            {
                "symptom": f.symptom.value,
                "detected": f.detected,
                "evidence": f.evidence,
                "narrative": f.narrative,
            }
            for f in report.findings
        ],
        "competitors": [
            {
                "competitor": c.competitor_label,
                "trend": _trend_dict(c.trend),
                "total_gain": c.total_gain,
                "delta_mirror_tau": c.delta_mirror_tau,
                "coverage_ratio": c.coverage_ratio,
                "verdict": c.verdict.value,
            }
            for c in report.competitors
        ],
        "verdict": report.verdict.value,
        "metadata": report.metadata,
    }


def report_to_json(report: SymptomReport, config: DiagnosticsConfig) -> str:
    return json.dumps(report_to_dict(report, config), indent=2, sort_keys=True) + "\n"


def report_to_text(report: SymptomReport, config: DiagnosticsConfig) -> str:
    lines = [
        f"Obsolescence report: {report.target_label}",
        f"Verdict: {report.verdict.value}",
        "",
    ]
    for f in report.findings:
        mark = "DETECTED" if f.detected else "not detected"
        lines.append(f"[{mark:>12}] {f.symptom.value}")
        lines.append(f"               {f.narrative}")
    if report.competitors:
        lines.append("")
        lines.append("Competitors:")
        for c in report.competitors:
            lines.append(
                f"  {c.competitor_label}: {c.verdict.value} "
                f"(total gain {c.total_gain:+.2f} pmw, coverage "
                f"{c.coverage_ratio:.3f}, mirror tau {c.delta_mirror_tau:.2f})"
            )
    lines.append("")
    return "\n".join(lines)
