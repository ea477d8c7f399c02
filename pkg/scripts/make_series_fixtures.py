#!/usr/bin/env python3
"""Build frequency-series CSV fixtures from the published delta table.

Baselines are free parameters (only bounded below by the cumulative minima);
every statistic computed from these series is baseline-invariant.
"""

import csv
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

BASELINES = {
    "in_order_that": 19.0,
    "in_order_for_to": 2.0,
    "so_that_purposive": 60.0,
}


def main() -> None:
    with open(FIXTURES / "table1_deltas.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    for column, baseline in BASELINES.items():
        out = FIXTURES / f"{column}.csv"
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["decade", "count", "token_total", "pmw"])
            value = baseline
            writer.writerow([rows[0]["from_decade"], 0, 0, f"{value:.2f}"])
            for row in rows:
                value += float(row[column])
                writer.writerow([row["to_decade"], 0, 0, f"{value:.2f}"])
        print(f"wrote {out}")

    # estimated purposive "so" series at the three sampled points
    with open(FIXTURES / "table2.csv", newline="") as fh:
        table2 = list(csv.DictReader(fh))
    out = FIXTURES / "purposive_so.csv"
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["decade", "count", "token_total", "pmw"])
        for row in table2:
            writer.writerow([row["decade"], 0, 0, row["purposive_pmw"]])
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
