"""Command-line front end: ingest, query, trend/deltas, diagnostics,
sampling, the annotation service, and the full obsolescence report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import annotation, diagnostics, index as index_mod, query as query_mod, stats
from .corpus import CorpusError, parse_vertical
from .diagnostics import DiagnosticsConfig
from .index import build_index, corpus_hash
from .query import match_pattern, parse_pattern

EXIT_OK = 0
EXIT_USER_ERROR = 1
EXIT_INTERNAL_ERROR = 2

DEFAULT_SEED = 20211900


class UserError(Exception):
    pass


def load_config(path: str | None) -> dict[str, str]:
    """Read the key=value config file; --config beats OBSOLENS_CONFIG."""
    if path is None:
        path = os.environ.get("OBSOLENS_CONFIG")
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        raise UserError(f"config file not found: {p}")
    config: dict[str, str] = {}
    for line in p.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UserError(f"bad config line (expected key=value): {line!r}")
        config[key.strip()] = value.strip()
    return config


def diagnostics_config(config: dict[str, str], args) -> DiagnosticsConfig:
    alpha = float(getattr(args, "alpha", None) or config.get("alpha", 0.05))
    window = int(config.get("negation_window", 6))
    punct = config.get("punctuation_tags")
    kwargs = {"alpha": alpha, "negation_window": window}
    if punct:
        kwargs["punctuation_tags"] = frozenset(
            t.strip().casefold() for t in punct.split(",") if t.strip()
        )
    return DiagnosticsConfig(**kwargs)


def read_corpus(path: str):
    p = Path(path)
    if not p.exists():
        raise UserError(f"corpus file not found: {p}")
    data = p.read_bytes()
    return parse_vertical(data), corpus_hash(data)


def read_series(path: str, label: str | None = None) -> stats.FrequencySeries:
    p = Path(path)
    if not p.exists():
        raise UserError(f"series file not found: {p}")
    return stats.read_series_csv(p.read_text(encoding="utf-8"), label or p.stem)


def _patterns(args, config: dict[str, str]) -> list[str]:
    patterns = list(args.pattern or [])
    if not patterns and config.get("pattern"):
        patterns = [config["pattern"]]
    if not patterns:
        raise UserError("no pattern given (use --pattern or the config file)")
    return patterns


def combined_series(idx, patterns: list[str], label: str, genre: str | None = None):
    """Frequency series summed over patterns (the multi-gap variants of one
    construction are separate searches, totalled per decade)."""
    series_list = [
        query_mod.frequency_series(
            match_pattern(idx, parse_pattern(p)), idx, label=p, genre_filter=genre
        )
        for p in patterns
    ]
    return stats.sum_series(label, series_list)


def _write_output(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _plot_csv(rows: list[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["decade", "series", "value"])
    writer.writerows(rows)
    return buf.getvalue()


def cmd_ingest(args, config):
    documents, digest = read_corpus(args.corpus)
    idx = build_index(documents)
    if args.cache:
        index_mod.save_cache(idx, Path(args.cache), digest)
    decades = ", ".join(str(d) for d in idx.decades)
    print(f"documents: {len(documents)}")
    print(f"tokens: {idx.total_tokens()}")
    print(f"decades: {decades}")
    print(f"genres: {', '.join(sorted(idx.genres))}")
    print(f"corpus_hash: {digest}")
    return EXIT_OK


def cmd_query(args, config):
    documents, _ = read_corpus(args.corpus)
    idx = build_index(documents)
    matches = []
    for p in _patterns(args, config):
        matches.extend(match_pattern(idx, parse_pattern(p)))
    matches.sort(key=lambda m: (m.doc_no, m.sentence_no, m.start))
    if args.format == "csv":
        _write_output(query_mod.export_matches_csv(idx, matches, width=args.width), args.out)
    elif args.format == "json":
        rows = []
        for m in matches:
            line = query_mod.kwic(idx, m, args.width)
            rows.append({
                "doc_id": m.doc_id, "year": m.year, "decade": m.decade.start_year,
                "genre": m.genre, "sentence_no": m.sentence_no, "start": m.start,
                "end": m.end, "hit": line.hit, "left": line.left, "right": line.right,
            })
        _write_output(json.dumps(rows, indent=2, sort_keys=True) + "\n", args.out)
    else:
        for m in matches:
            line = query_mod.kwic(idx, m, args.width)
            print(f"{m.doc_id}\t{m.year}\t{m.genre}\t{line.left} [{line.hit}] {line.right}")
        print(f"total matches: {len(matches)}", file=sys.stderr)
    return EXIT_OK


def _series_from_args(args, config) -> stats.FrequencySeries:
    if getattr(args, "series", None):
        return read_series(args.series)
    if getattr(args, "corpus", None):
        documents, _ = read_corpus(args.corpus)
        idx = build_index(documents)
        patterns = _patterns(args, config)
        return combined_series(idx, patterns, label=" + ".join(patterns))
    raise UserError("give either --series or --corpus with --pattern")


def cmd_trend(args, config):
    series = _series_from_args(args, config)
    trend = stats.kendall_trend(series)
    if args.format == "json":
        payload = {
            "label": series.label, "tau": trend.tau, "p_value": trend.p_value,
            "n": trend.n, "s_statistic": trend.s_statistic, "method": trend.method,
        }
        _write_output(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label", "tau", "p_value", "n", "s_statistic", "method"])
        writer.writerow([series.label, repr(trend.tau), repr(trend.p_value),
                         trend.n, trend.s_statistic, trend.method])
        _write_output(buf.getvalue(), args.out)
    else:
        print(f"series: {series.label}")
        print(f"tau = {trend.tau:.7f}")
        print(f"p = {trend.p_value:.3e}  (method: {trend.method}, n = {trend.n})")
    if args.plot_out:
        rows = [(p.decade.start_year, series.label, repr(p.pmw)) for p in series.points]
        Path(args.plot_out).write_text(_plot_csv(rows), encoding="utf-8")
    return EXIT_OK


def cmd_deltas(args, config):
    series = _series_from_args(args, config)
    table = stats.delta_table(series)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["from_decade", "to_decade", "delta_pmw"])
        for a, b, d in table.rows:
            writer.writerow([a.start_year, b.start_year, repr(d)])
        writer.writerow(["total", "", repr(table.total)])
        _write_output(buf.getvalue(), args.out)
    elif args.format == "json":
        payload = {
            "label": series.label,
            "rows": [{"from": a.start_year, "to": b.start_year, "delta_pmw": d}
                     for a, b, d in table.rows],
            "total": table.total,
        }
        _write_output(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        for a, b, d in table.rows:
            print(f"{a}-{b}\t{d:+.2f}")
        print(f"total\t{table.total:+.2f}")
    return EXIT_OK


def cmd_genres(args, config):
    documents, _ = read_corpus(args.corpus)
    idx = build_index(documents)
    shares = index_mod.all_genre_shares(idx)
    genres = sorted(idx.genres)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["decade"] + genres)
        for d in idx.decades:
            writer.writerow([d.start_year] + [repr(shares.share(d, g)) for g in genres])
        _write_output(buf.getvalue(), args.out)
    else:
        print("decade\t" + "\t".join(genres))
        for d in idx.decades:
            print(str(d) + "\t" + "\t".join(f"{shares.share(d, g):.4f}" for g in genres))
    return EXIT_OK


def cmd_fragment(args, config):
    documents, _ = read_corpus(args.corpus)
    idx = build_index(documents)
    dconfig = diagnostics_config(config, args)
    patterns = _patterns(args, config)
    shares = index_mod.all_genre_shares(idx)
    per_genre = {
        g: combined_series(idx, patterns, label=g, genre=g) for g in sorted(idx.genres)
    }
    finding = diagnostics.check_fragmentation(per_genre, shares, dconfig)
    if args.format == "json":
        payload = {"symptom": finding.symptom.value, "detected": finding.detected,
                   "evidence": finding.evidence, "narrative": finding.narrative}
        _write_output(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        print(f"{finding.symptom.value}: {'DETECTED' if finding.detected else 'not detected'}")
        print(finding.narrative)
    if args.plot_out:
        rows = []
        for genre in sorted(finding.evidence["per_genre"]):
            info = finding.evidence["per_genre"][genre]
            for point in info.get("extrapolated_series", []):
                rows.append((point["decade"], genre, repr(point["pmw"])))
        Path(args.plot_out).write_text(_plot_csv(rows), encoding="utf-8")
    return EXIT_OK


def cmd_atrophy(args, config):
    documents, _ = read_corpus(args.corpus)
    idx = build_index(documents)
    dconfig = diagnostics_config(config, args)
    matches = []
    for p in _patterns(args, config):
        matches.extend(match_pattern(idx, parse_pattern(p)))
    matches.sort(key=lambda m: (m.doc_no, m.sentence_no, m.start))
    finding = diagnostics.check_atrophy(idx, matches, dconfig)
    if args.format == "json":
        payload = {"symptom": finding.symptom.value, "detected": finding.detected,
                   "evidence": finding.evidence, "narrative": finding.narrative}
        _write_output(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        print(f"{finding.symptom.value}: {'DETECTED' if finding.detected else 'not detected'}")
        print(finding.narrative)
    return EXIT_OK


def cmd_compete(args, config):
    dconfig = diagnostics_config(config, args)
    target = read_series(args.target)
    competitor = read_series(args.competitor)
    finding = diagnostics.competitor_mirror(target, competitor, dconfig)
    if args.format == "json":
        payload = {
            "competitor": finding.competitor_label,
            "verdict": finding.verdict.value,
            "total_gain": finding.total_gain,
            "coverage_ratio": finding.coverage_ratio,
            "delta_mirror_tau": finding.delta_mirror_tau,
            "trend": {"tau": finding.trend.tau, "p_value": finding.trend.p_value},
        }
        _write_output(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        print(f"competitor: {finding.competitor_label}")
        print(f"verdict: {finding.verdict.value}")
        print(f"total_gain: {finding.total_gain:+.2f} pmw")
        print(f"coverage_ratio: {finding.coverage_ratio:.3f}")
        print(f"delta_mirror_tau: {finding.delta_mirror_tau:.3f}")
    return EXIT_OK


def cmd_sample(args, config):
    documents, digest = read_corpus(args.corpus)
    idx = build_index(documents)
    patterns = _patterns(args, config)
    matches = []
    for p in patterns:
        matches.extend(match_pattern(idx, parse_pattern(p)))
    matches.sort(key=lambda m: (m.doc_no, m.sentence_no, m.start))
    if not matches:
        raise UserError("no matches to sample")
    seed = args.seed
    sampled = stats.draw_sample(matches, args.n, seed)
    series = combined_series(idx, patterns, label=" + ".join(patterns))
    decade_total_pmw = {p.decade.start_year: p.pmw for p in series.points}
    tasks = []
    for m in sampled:
        line = query_mod.kwic(idx, m, args.width)
        tasks.append(annotation.AnnotationTask(
            sample_id=f"{m.doc_id}:{m.sentence_no}:{m.start}",
            left=line.left, hit=line.hit, right=line.right,
            decade=m.decade.start_year, doc_id=m.doc_id,
        ))
    annotation.SessionStore.create(
        Path(args.session),
        session_id=Path(args.session).stem,
        patterns=patterns,
        seed=seed,
        corpus_hash=digest,
        decade_total_pmw=decade_total_pmw,
        tasks=tasks,
    )
    print(f"session written: {args.session} ({len(tasks)} tasks, seed {seed})")
    return EXIT_OK


def cmd_annotate_serve(args, config):
    store = annotation.SessionStore(Path(args.session))
    static_dir = Path(args.static_dir) if args.static_dir else None
    pending = store.progress()["pending"]
    print(f"serving session {store.session.session_id} "
          f"({pending} pending) on http://127.0.0.1:{args.port}")
    try:
        annotation.serve_annotation(store, args.port, static_dir=static_dir)
    except OSError as exc:
        raise UserError(f"cannot bind port {args.port}: {exc}") from None
    return EXIT_OK


def cmd_report(args, config):
    documents, digest = read_corpus(args.corpus)
    idx = build_index(documents)
    dconfig = diagnostics_config(config, args)
    patterns = _patterns(args, config)
    label = args.label or " + ".join(patterns)

    matches = []
    for p in patterns:
        matches.extend(match_pattern(idx, parse_pattern(p)))
    matches.sort(key=lambda m: (m.doc_no, m.sentence_no, m.start))
    series = combined_series(idx, patterns, label=label)
    shares = index_mod.all_genre_shares(idx)
    per_genre = {
        g: combined_series(idx, patterns, label=g, genre=g) for g in sorted(idx.genres)
    }

    findings = [
        diagnostics.check_negative_correlation(series, dconfig),
        diagnostics.check_fragmentation(per_genre, shares, dconfig),
        diagnostics.check_atrophy(idx, matches, dconfig),
    ]
    competitors = []
    for spec in args.competitor or []:
        name, sep, path = spec.partition("=")
        if not sep:
            raise UserError(f"--competitor expects label=series.csv, got {spec!r}")
        competitors.append(
            diagnostics.competitor_mirror(series, read_series(path, name), dconfig)
        )
    metadata = {
        "corpus_hash": digest,
        "seed": args.seed,
        "patterns": patterns,
        "timestamp": None,  # omitted by default so outputs are byte-reproducible
    }
    report = diagnostics.compile_report(label, findings, competitors, metadata)
    if args.format == "json":
        _write_output(diagnostics.report_to_json(report, dconfig), args.out)
    else:
        _write_output(diagnostics.report_to_text(report, dconfig), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obsolens",
        description="Diachronic corpus analytics and obsolescence diagnostics",
    )
    parser.add_argument("--config", help="key=value config file (or OBSOLENS_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, corpus=False, series=False, patterns=False, fmt=True):
        if corpus:
            p.add_argument("--corpus", help="vertical-format corpus file")
        if series:
            p.add_argument("--series", help="frequency series CSV")
        if patterns:
            p.add_argument("--pattern", action="append",
                           help="token pattern (repeat to sum variants)")
        if fmt:
            p.add_argument("--format", choices=["table", "csv", "json"], default="table")
            p.add_argument("--out", help="write output to file instead of stdout")
        p.add_argument("--alpha", type=float, help="significance level (default 0.05)")

    p = sub.add_parser("ingest", help="parse a corpus and report/caches its index")
    p.add_argument("--corpus", required=True)
    p.add_argument("--cache", help="path for the on-disk index cache")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", help="run a pattern and list KWIC matches")
    add_common(p, corpus=True, patterns=True)
    p.add_argument("--width", type=int, default=8, help="KWIC context tokens")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("trend", help="Kendall trend test on a frequency series")
    add_common(p, corpus=True, series=True, patterns=True)
    p.add_argument("--plot-out", help="tidy plot-data CSV (decade,series,value)")
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("deltas", help="decade-to-decade gains and losses")
    add_common(p, corpus=True, series=True, patterns=True)
    p.set_defaults(func=cmd_deltas)

    p = sub.add_parser("genres", help="per-decade genre shares")
    add_common(p, corpus=True)
    p.set_defaults(func=cmd_genres)

    p = sub.add_parser("fragment", help="distributional-fragmentation check")
    add_common(p, corpus=True, patterns=True)
    p.add_argument("--plot-out", help="tidy plot-data CSV of extrapolated series")
    p.set_defaults(func=cmd_fragment)

    p = sub.add_parser("atrophy", help="paradigmatic-atrophy check")
    add_common(p, corpus=True, patterns=True)
    p.set_defaults(func=cmd_atrophy)

    p = sub.add_parser("compete", help="competitor mirror analysis on two series")
    p.add_argument("--target", required=True)
    p.add_argument("--competitor", required=True)
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.add_argument("--out")
    p.add_argument("--alpha", type=float)
    p.set_defaults(func=cmd_compete)

    p = sub.add_parser("sample", help="draw a reproducible annotation sample")
    p.add_argument("--corpus", required=True)
    p.add_argument("--pattern", action="append")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--width", type=int, default=8)
    p.add_argument("--session", required=True, help="session JSONL file to create")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("annotate", help="annotation workflow")
    annotate_sub = p.add_subparsers(dest="annotate_command", required=True)
    ps = annotate_sub.add_parser("serve", help="serve the annotation API and UI")
    ps.add_argument("--session", required=True)
    ps.add_argument("--port", type=int, default=8731)
    ps.add_argument("--static-dir", help="directory of built UI assets")
    ps.set_defaults(func=cmd_annotate_serve)

    p = sub.add_parser("report", help="full three-symptom obsolescence report")
    add_common(p, corpus=True, patterns=True)
    p.add_argument("--label", help="target construction label")
    p.add_argument("--competitor", action="append",
                   help="label=series.csv (repeatable)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_report)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USER_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except (UserError, CorpusError, stats.StatsError, query_mod.PatternError,
            index_mod.EmptyDecade, diagnostics.DiagnosticsError,
            annotation.SessionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER_ERROR
    except Exception as exc:  # noqa: BLE001 - internal failures map to exit 2
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR


def main() -> None:
    sys.exit(run())
