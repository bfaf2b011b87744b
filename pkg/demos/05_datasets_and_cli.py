"""
Datasets and the command line
=============================

Datasets use three whitespace-separated files: ``<name>-nverts.txt``,
``<name>-simplices.txt`` and ``<name>-times.txt``. Arrivals are sorted by
time and cut into T slices of near-equal count. The same files drive the
``simplexpred`` command, which we call in-process here.
"""

import tempfile
from pathlib import Path

from simplexpred import load_named, slice_log
from simplexpred.cli import main

simplices = [
    (0, [1, 2]), (0, [2, 3]), (1, [3, 4]), (1, [1, 3]), (2, [1, 2, 3]),
    (2, [4, 5]), (3, [2, 4]), (3, [3, 5]), (4, [2, 3, 4]), (4, [3, 4, 5]),
]

with tempfile.TemporaryDirectory() as tmp:
    prefix = Path(tmp) / "toy"
    Path(f"{prefix}-nverts.txt").write_text("".join(f"{len(s)}\n" for _, s in simplices))
    Path(f"{prefix}-simplices.txt").write_text("".join(f"{v}\n" for _, s in simplices for v in s))
    Path(f"{prefix}-times.txt").write_text("".join(f"{t}\n" for t, _ in simplices))

    f = slice_log(load_named(str(prefix)), T=5)
    for t in range(f.T):
        print(f"slice {t}: arrivals {[list(s) for s in f.slice_arrivals[t]]}, maximal {sorted(map(list, f.snapshot(t).maximal))}")

    print("\n$ simplexpred predict --data toy --T 5 --top 5")
    main(["predict", "--data", str(prefix), "--T", "5", "--top", "5"])
