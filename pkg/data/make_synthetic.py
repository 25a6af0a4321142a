"""Regenerate the synthetic example datasets in this directory.

Count files scale published posterior-mean proportions for the indigenous
education distribution (years 2001, 2006, 2014, 2017; seven categories) by
10,000 and round. The microdata file is a small weighted sample drawn from
those proportions with a fixed seed. Neither is real survey data.
"""
import csv
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent

LABELS = [
    "Year 11 or below",
    "Year 12",
    "Certificate",
    "Diploma",
    "Bachelor",
    "Graduate Diploma",
    "Postgraduate",
]

MEANS = {
    "2001": [0.5876, 0.1141, 0.1871, 0.0325, 0.0532, 0.0182, 0.0073],
    "2006": [0.5401, 0.1599, 0.2097, 0.0170, 0.0525, 0.0146, 0.0062],
    "2014": [0.4904, 0.1639, 0.2342, 0.0308, 0.0557, 0.0112, 0.0137],
    "2017": [0.4034, 0.1875, 0.2748, 0.0484, 0.0448, 0.0182, 0.0229],
}


def main():
    for year, p in MEANS.items():
        with open(HERE / f"indigenous_{year}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["category", "count", "label"])
            for k, (pk, label) in enumerate(zip(p, LABELS), start=1):
                w.writerow([k, round(pk * 10_000), label])

    rng = np.random.default_rng(20210826)
    with open(HERE / "microdata_example.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["unit_id", "category", "weight", "group"])
        uid = 0
        for year in ("2001", "2017"):
            p = np.array(MEANS[year])
            p = p / p.sum()
            for cat in rng.choice(7, size=120, p=p) + 1:
                uid += 1
                w.writerow([f"u{uid:04d}", int(cat), f"{rng.gamma(4.0, 250.0):.2f}", f"ind{year}"])


if __name__ == "__main__":
    main()
