"""The benchmark CLI: reproducible experiment runs emitting CSV.

Invokes the `gradts` command line programmatically, then shows the emitted
files and verifies that a re-run with the same seed is byte-identical.
"""

import tempfile
from pathlib import Path

from gradts import cli

args = ["run", "--problem", "levy", "--dim", "6", "--iterations", "10",
        "--repeats", "2", "--candidates", "256", "--seed", "7"]

with tempfile.TemporaryDirectory() as tmp:
    out1, out2 = Path(tmp) / "a", Path(tmp) / "b"
    assert cli.main(args + ["--out", str(out1)]) == 0
    assert cli.main(args + ["--out", str(out2)]) == 0

    print("emitted files:")
    for f in sorted(out1.iterdir()):
        print(f"  {f.name}  ({f.stat().st_size} bytes)")

    same = (out1 / "results.csv").read_bytes() == (out2 / "results.csv").read_bytes()
    print(f"\nsame seed twice -> byte-identical results.csv: {same}")

    head = (out1 / "results.csv").read_text().splitlines()[:4]
    print("\nresults.csv head:")
    for line in head:
        print(f"  {line}")
