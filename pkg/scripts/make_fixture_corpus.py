#!/usr/bin/env python3
"""Generate the synthetic vertical-format fixture corpus.

Construction profile (asserted at the bottom):
  - "in order that" declines strictly monotonically, decade on decade;
  - it concentrates in non-fiction (rising counts) while magazine and
    newspaper fall and fiction stays flat;
  - position mix and negation share of the target are stable (no atrophy);
  - decade 2000 carries >= 100 "so that <gap> <modal>" hits for annotation
    sampling;
  - every (decade, genre) slice has an exact, fixed token total, so genre
    shares are constant and extrapolation does not reshuffle trends.
"""

import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

FIXTURES = ROOT / "fixtures"
SEED = 73

DECADES = list(range(1900, 2001, 10))
GENRES = ["fic", "mag", "news", "nf"]
SLICE_TOKENS = {"fic": 1500, "mag": 1200, "news": 1000, "nf": 1100}
YEAR_OFFSET = {"fic": 1, "mag": 3, "news": 5, "nf": 7}

# "in order that" instances per decade, per genre
TARGET_COUNTS = {
    "nf":   [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
    "mag":  [30, 27, 24, 21, 18, 15, 12, 9, 6, 3, 1],
    "news": [25, 22, 19, 16, 13, 10, 8, 6, 4, 2, 1],
    "fic":  [10, 11, 10, 11, 10, 11, 10, 11, 10, 11, 10],
}

S = lambda text, tags: list(zip(text.split(), tags.split()))  # noqa: E731

TARGET_INITIAL = S(
    "In order that the plan might succeed , they worked hard .",
    "ii nn1 cst at nn1 vm vvi y pp vvd rr y",
)
TARGET_NONINITIAL = S(
    "He worked hard in order that his family might eat well .",
    "pp vvd rr ii nn1 cst appge nn1 vm vvi rr y",
)
TARGET_NEGATED = S(
    "She stayed home in order that he might not feel lonely .",
    "pp vvd rr ii nn1 cst pp vm xx vvi jj y",
)
SO_THAT_GAP1 = S(
    "They saved money so that we could travel .",
    "pp vvd nn1 cs cst pp vm vvi y",
)
SO_THAT_GAP2 = S(
    "She spoke slowly so that the children would understand .",
    "pp vvd rr cs cst at nn2 vm vvi y",
)
SO_THAT_GAP3 = S(
    "He left early so that all the guests could rest .",
    "pp vvd rr cs cst db at nn2 vm vvi y",
)
IN_ORDER_FOR = S(
    "They arranged it in order for someone to help .",
    "pp vvd ppy ii nn1 if pn1 to vvi y",
)
FOR_TO = S(
    "I laid them on the counter for him to see .",
    "pp vvd ppx ii at nn1 if pp to vvi y",
)
FILLERS = [
    S("The old man walked slowly across the quiet street .",
      "at jj nn1 vvd rr ii at jj nn1 y"),
    S("Children played near the river all afternoon .",
      "nn2 vvd ii at nn1 db nnt1 y"),
    S("A cold wind moved through the empty town .",
      "at1 jj nn1 vvd ii at jj nn1 y"),
    S("The letter arrived late and nobody read it .",
      "at nn1 vvd rr cc pn1 vvd ppy y"),
    S("Doctors examined the patient with great care .",
      "nn2 vvd at nn1 iw jj nn1 y"),
    S("Music filled the hall during the long evening .",
      "nn1 vvd at nn1 ii at jj nn1 y"),
    S("Rain fell steadily on the tin roof .",
      "nn1 vvd rr ii at nn1 nn1 y"),
]
MAX_FILLER = max(len(f) for f in FILLERS)


def padding_sentence(length: int) -> list[tuple[str, str]]:
    assert length >= 4, length
    words = [("It", "pp"), ("was", "vbd")]
    words += [("very", "rg")] * (length - 4)
    words += [("quiet", "jj"), (".", "y")]
    return words


def target_sentence(instance_no: int) -> list[tuple[str, str]]:
    if instance_no % 5 == 4:
        return TARGET_NEGATED
    return TARGET_INITIAL if instance_no % 2 == 0 else TARGET_NONINITIAL


def build_slice(rng, decade_idx: int, genre: str, counter_start: int):
    decade = DECADES[decade_idx]
    budget = SLICE_TOKENS[genre]
    sentences = []
    counter = counter_start
    for _ in range(TARGET_COUNTS[genre][decade_idx]):
        sentences.append(target_sentence(counter))
        counter += 1
    so_gap1 = 28 if decade == 2000 else 2
    sentences += [SO_THAT_GAP1] * so_gap1
    sentences += [SO_THAT_GAP2, SO_THAT_GAP3, IN_ORDER_FOR, FOR_TO]
    used = sum(len(s) for s in sentences)
    remaining = budget - used
    assert remaining >= 4, (decade, genre, remaining)
    while remaining > MAX_FILLER + 4:
        filler = rng.choice(FILLERS)
        if len(filler) > remaining - 4:
            continue
        sentences.append(filler)
        remaining -= len(filler)
    sentences.append(padding_sentence(remaining))
    return sentences, counter


def main() -> None:
    rng = random.Random(SEED)
    lines = ["## synthetic fixture corpus for obsolens tests"]
    for decade_idx, decade in enumerate(DECADES):
        counter = 0
        for genre in GENRES:
            sentences, counter = build_slice(rng, decade_idx, genre, counter)
            year = decade + YEAR_OFFSET[genre]
            lines.append(f"#doc id=d{decade}_{genre} year={year} genre={genre}")
            for sentence in sentences:
                for surface, pos in sentence:
                    lines.append(f"{surface}\t{pos}")
                lines.append("")
    text = "\n".join(lines) + "\n"
    out = FIXTURES / "corpus.vert"
    out.write_text(text, encoding="utf-8")

    # verify the constructed profile with the library itself
    from obsolens.corpus import parse_vertical
    from obsolens.diagnostics import DiagnosticsConfig, check_atrophy
    from obsolens.index import build_index, token_totals
    from obsolens.query import frequency_series, match_pattern, parse_pattern
    from obsolens.stats import kendall_trend

    documents = parse_vertical(text)
    idx = build_index(documents)
    for decade_obj in idx.decades:
        for genre in GENRES:
            assert token_totals(idx, decade_obj, genre) == SLICE_TOKENS[genre]
    matches = match_pattern(idx, parse_pattern("in order that"))
    series = frequency_series(matches, idx, label="in order that")
    values = series.pmw_values
    assert all(b < a for a, b in zip(values, values[1:])), values
    trend = kendall_trend(series)
    assert trend.tau == -1.0 and trend.p_value < 0.05
    finding = check_atrophy(idx, matches, DiagnosticsConfig())
    assert not finding.detected, finding.narrative
    gap1_2000 = [m for m in match_pattern(idx, parse_pattern("so that * _vm*"))
                 if m.decade.start_year == 2000]
    assert len(gap1_2000) >= 100, len(gap1_2000)
    print(f"wrote {out} ({idx.total_tokens()} tokens, {len(documents)} documents)")


if __name__ == "__main__":
    main()
