"""Parse sandbox behavior reports and encode them as sparse presence vectors."""

import json
import tempfile
from pathlib import Path

from ransomkit.behavior import build_vocabulary, parse_report, registry_sequence, vectorize
from ransomkit.synth import synthetic_behavior_corpus

# a handcrafted report: note the messy key spellings
doc = {
    "behavior": {
        "apistats": {"2204": {"NtCreateFile": 12, "CryptEncrypt": 3}},
        "summary": {
            "regkey_written": ["HKLM\\Software\\Run\\updater", "hklm\\software\\run\\updater"],
            "regkey_deleted": ["HKCU\\Console", "HKCU\\Environment"],
            "file_created": ["C:\\Users\\alice\\Desktop\\README.locked"],
            "dll_loaded": ["crypt32.dll"],
        },
    },
    "dropped": [{"name": "payload.exe"}],
}
report = parse_report(json.dumps(doc))
print("normalized registry writes:", report.registry_ops["write"])
print("delete sequence (order kept):", registry_sequence(report, "delete"))
print("file created:", report.file_ops["create"])
print("drops:", report.drops, "extensions:", report.drop_extensions)

# a small corpus: vocabulary + vectors
with tempfile.TemporaryDirectory() as tmp:
    entries = synthetic_behavior_corpus(Path(tmp), n_per_class=20, seed=7)
    from ransomkit.behavior import parse_report_file

    reports = [parse_report_file(e.path, label=e.label) for e in entries]
    vocab = build_vocabulary(reports, min_df=1)
    print(f"\nvocabulary over {len(reports)} reports: {len(vocab)} (category, token) pairs")
    print("per-category sizes:")
    for row, count in vocab.summary_counts().items():
        print(f"  {row:20s} {count}")

    vec = vectorize(reports[0], vocab)
    print(f"\nfirst report ({vec.label}) activates {len(vec.indices)} of {vec.dimension} features")
    print("first five active entries:", vocab.decode(vec.indices[:5]))
