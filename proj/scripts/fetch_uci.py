#!/usr/bin/env python3
"""Fetch the UCI benchmark files referenced by data/manifest.json.

The wine and toy fixtures ship with the repository. The remaining four
datasets are downloaded from the UCI Machine Learning Repository and
normalized into the plain CSV layout the manifest expects:

  bcw.csv          breast-cancer-wisconsin.data with the leading sample-id
                   column kept in place (the manifest selects columns 1-9
                   and label column 10); 699 rows, 16 of them with '?'.
  spect.csv        SPECT.train + SPECT.test concatenated in that order;
                   267 rows, diagnosis in column 0, 22 binary attributes.
  haberman.csv     haberman.data verbatim; 306 rows, class in column 3.
  breasttissue.csv converted from BreastTissue.xls ("Data" sheet): the
                   "Case #" column is dropped and the class column moved
                   first, giving class + 9 numeric attributes, 106 rows.

Requires network access to archive.ics.uci.edu. The BreastTissue
conversion additionally needs pandas with xlrd (pip install pandas xlrd).
"""

import io
import sys
import urllib.request
from pathlib import Path

BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases"
OUT = Path(__file__).resolve().parent.parent / "data"


def fetch(url: str) -> bytes:
    print(f"fetching {url}")
    with urllib.request.urlopen(url) as resp:
        return resp.read()


def write(name: str, text: str) -> None:
    path = OUT / name
    path.write_text(text)
    rows = sum(1 for line in text.splitlines() if line.strip())
    print(f"wrote {path} ({rows} rows)")


def fetch_bcw() -> None:
    raw = fetch(f"{BASE}/breast-cancer-wisconsin/breast-cancer-wisconsin.data")
    write("bcw.csv", raw.decode("ascii"))


def fetch_spect() -> None:
    train = fetch(f"{BASE}/spect/SPECT.train").decode("ascii")
    test = fetch(f"{BASE}/spect/SPECT.test").decode("ascii")
    write("spect.csv", train.rstrip("\n") + "\n" + test)


def fetch_haberman() -> None:
    raw = fetch(f"{BASE}/haberman/haberman.data")
    write("haberman.csv", raw.decode("ascii"))


def fetch_breasttissue() -> None:
    raw = fetch(f"{BASE}/00192/BreastTissue.xls")
    try:
        import pandas as pd
    except ImportError:
        sys.exit("BreastTissue conversion needs pandas + xlrd (pip install pandas xlrd)")
    frame = pd.read_excel(io.BytesIO(raw), sheet_name="Data")
    frame = frame.drop(columns=["Case #"])
    cols = ["Class"] + [c for c in frame.columns if c != "Class"]
    frame = frame[cols]
    write("breasttissue.csv", frame.to_csv(index=False, header=False))


def main() -> None:
    OUT.mkdir(exist_ok=True)
    fetch_bcw()
    fetch_spect()
    fetch_haberman()
    fetch_breasttissue()
    print("done; run the acceptance suite to validate the fixtures")


if __name__ == "__main__":
    main()
