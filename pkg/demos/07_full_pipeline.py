"""Run the complete CLI pipeline on both synthetic corpora.

Equivalent shell usage:

    ransomkit pipeline --mode dynamic --manifest reports.csv \
        --out run/ --seed 42 --kind delete --n 3 4
"""

import json
import tempfile
from pathlib import Path

from ransomkit.cli import main
from ransomkit.manifest import write_manifest
from ransomkit.synth import synthetic_behavior_corpus, synthetic_pe_corpus

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    print("=== dynamic mode ===")
    entries = synthetic_behavior_corpus(tmp / "reports", n_per_class=60, seed=5)
    write_manifest(tmp / "reports.csv", entries)
    rc = main(["pipeline", "--mode", "dynamic", "--manifest", str(tmp / "reports.csv"),
               "--out", str(tmp / "dyn"), "--seed", "42",
               "--mi-prefilter", "120", "--top-r", "30", "--k-max", "6"])
    assert rc == 0
    selected = json.loads((tmp / "dyn" / "selection_summary.json").read_text())
    print("wrapper kept:", *selected["best_features"], sep="\n  ")
    print("n-gram summary:")
    print((tmp / "dyn" / "ngram_summary.txt").read_text())

    print("=== static mode ===")
    entries = synthetic_pe_corpus(tmp / "pes", n_per_class=40, seed=5)
    write_manifest(tmp / "pes.csv", entries)
    rc = main(["pipeline", "--mode", "static", "--manifest", str(tmp / "pes.csv"),
               "--out", str(tmp / "stat"), "--seed", "42",
               "--classifier", "forest", "--trees", "100"])
    assert rc == 0

    print("\nartifacts of the static run:")
    index = json.loads((tmp / "stat" / "artifacts.json").read_text())
    for name, digest in index["files"].items():
        print(f"  {name:24s} sha256 {digest[:16]}...")
