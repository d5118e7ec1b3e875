#!/usr/bin/env python3
"""Export the 13-variable wine data set to data/real/wine.csv.

The 178-sample wine data (Barolo, Grignolino, Barbera; Forina et al.) ships
with scikit-learn. The same variables are available from the R package
`gclus` (data(wine)); either source produces an equivalent file.
"""

import csv
import pathlib

from sklearn.datasets import load_wine


def main() -> None:
    wine = load_wine()
    out = pathlib.Path(__file__).resolve().parents[1] / "real" / "wine.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([name.replace("/", "_") for name in wine.feature_names] + ["class"])
        for row, target in zip(wine.data, wine.target):
            writer.writerow([repr(float(v)) for v in row] + [wine.target_names[target]])
    print(f"wrote {out} ({len(wine.data)} rows)")


if __name__ == "__main__":
    main()
