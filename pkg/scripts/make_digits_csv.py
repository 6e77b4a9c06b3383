"""Regenerate data/digits_01.csv from the UCI handwritten-digits test set.

The fixture holds the label-0 and label-1 rows (360 in total: 178 zeros,
182 ones) of the classic 8x8 digits data as shipped with scikit-learn
(sklearn.datasets.load_digits, identical to the UCI "Optical Recognition
of Handwritten Digits" test partition). Each row is 64 integer pixel
values in 0..16 followed by the label. No header.

scikit-learn is only needed to run this script; the package itself never
imports it.
"""

import pathlib

from sklearn.datasets import load_digits


def main() -> None:
    data = load_digits()
    out = pathlib.Path(__file__).resolve().parents[1] / "data" / "digits_01.csv"
    lines = []
    for row, label in zip(data.data, data.target):
        if label in (0, 1):
            fields = [str(int(v)) for v in row] + [str(int(label))]
            lines.append(",".join(fields))
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} ({len(lines)} rows)")


if __name__ == "__main__":
    main()
