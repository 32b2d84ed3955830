"""Regenerate src/arcindex/data/knot_table.txt from the KnotInfo database.

Needs the optional ``database_knotinfo`` package; the package itself only
reads the generated text file.
"""

import csv
import os
import sys
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "arcindex" / "data" / "knot_table.txt"


def main() -> int:
    import database_knotinfo

    path = os.path.join(os.path.dirname(database_knotinfo.__file__), "csv_data", "knotinfo_data_complete.csv")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh, delimiter="|"))
    hdr = rows[0]
    col = {name: i for i, name in enumerate(hdr)}
    lines = ["# name crossings alt dt..."]
    for row in rows[2:]:
        c = int(row[col["crossing_number"]])
        if c == 0 or c > 10:
            continue
        dt = [int(v) for v in row[col["dt_notation"]].strip("[]").split(",")]
        alt = "A" if row[col["alternating"]].strip() == "Y" else "N"
        lines.append(" ".join([row[col["name"]], str(c), alt] + [str(v) for v in dt]))
    OUT.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines) - 1} entries to {OUT}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
