"""Sandbox behavior report parsing.

One report is a JSON document produced by a Cuckoo-style sandbox run. The
extractor reads only the arrays it knows about and ignores everything else.
Canonical fixture layout (keys may also appear inside behavior.summary):

    {
      "behavior": {
        "apistats": {"<pid>": {"<api name>": <count>, ...}, ...},
        "summary": {
          "regkey_created": [...], "regkey_opened": [...],
          "regkey_deleted": [...], "regkey_read": [...], "regkey_written": [...],
          "file_created": [...], "file_deleted": [...],
          "file_read": [...], "file_written": [...],
          "directory_created": [...],
          "dll_loaded": [...], "strings": [...]
        }
      },
      "network": {"domains": [{"domain": "..."} | "...", ...]},
      "dropped": [{"name": "..."} | "...", ...],
      "strings": [...]
    }

`regkey_opened` feeds the registry "create" op kind when no regkey_created
array exists (opened means open-or-create in the sandbox's instrumentation).

All tokens are normalized so the same key or path written two ways counts
as one token: lowercased, separators canonicalized to single backslashes,
drive-letter and \\\\?\\ prefixes stripped, the username segment under
\\users\\ wildcarded, and registry hive abbreviations expanded.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from ransomkit.errors import MalformedJsonError, MissingBehaviorSectionError

OP_KINDS = ("create", "delete", "read", "write")

_HIVES = {
    "hklm": "hkey_local_machine",
    "hkcu": "hkey_current_user",
    "hkcr": "hkey_classes_root",
    "hku": "hkey_users",
    "hkcc": "hkey_current_config",
}

_SEP_RUN = re.compile(r"\\+")
_DRIVE = re.compile(r"^[a-z]:\\?")


def normalize_token(token: str) -> str:
    """Canonical form of a registry key, path or plain token."""
    t = token.strip().lower().replace("/", "\\")
    if t.startswith("\\\\?\\"):
        t = t[4:]
    t = _SEP_RUN.sub("\\\\", t)
    t = _DRIVE.sub("", t)
    t = t.strip("\\")
    parts = t.split("\\")
    if parts and parts[0] in _HIVES:
        parts[0] = _HIVES[parts[0]]
    if len(parts) >= 2 and parts[0] == "users":
        parts[1] = "*"
    return "\\".join(parts)


def _normalized_list(values: object) -> list[str]:
    out: list[str] = []
    if not isinstance(values, list):
        return out
    for v in values:
        if isinstance(v, dict):
            v = v.get("domain") or v.get("name") or v.get("filepath") or ""
        if not isinstance(v, str):
            continue
        t = normalize_token(v)
        if t:
            out.append(t)
    return out


@dataclass
class BehaviorReport:
    """Structured record of one sandbox run, order-preserving throughout."""

    api_calls: list[str] = field(default_factory=list)
    registry_ops: dict[str, list[str]] = field(default_factory=lambda: {k: [] for k in OP_KINDS})
    file_ops: dict[str, list[str]] = field(default_factory=lambda: {k: [] for k in OP_KINDS})
    dirs_created: list[str] = field(default_factory=list)
    net_domains: list[str] = field(default_factory=list)
    drops: list[str] = field(default_factory=list)
    drop_extensions: list[str] = field(default_factory=list)
    strings: list[str] = field(default_factory=list)
    dlls: list[str] = field(default_factory=list)
    source_path: str = "<memory>"
    label: str | None = None


def registry_sequence(report: BehaviorReport, kind: str) -> list[str]:
    """The registry tokens of one op kind, verbatim in report order."""
    return list(report.registry_ops[kind])


def _extension_of(name: str) -> str:
    stem = name.rsplit("\\", 1)[-1]
    if "." in stem[1:]:
        return stem.rsplit(".", 1)[-1]
    return ""


def parse_report(
    text: str, source_path: str = "<memory>", label: str | None = None
) -> BehaviorReport:
    """Parse one report JSON document into a BehaviorReport.

    Raises MalformedJsonError for invalid JSON and
    MissingBehaviorSectionError when the document has no behavior section.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedJsonError(f"{source_path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedJsonError(f"{source_path}: top level is not an object")

    behavior = doc.get("behavior")
    if not isinstance(behavior, dict) or not (
        isinstance(behavior.get("summary"), dict) or isinstance(behavior.get("apistats"), dict)
    ):
        raise MissingBehaviorSectionError(f"{source_path}: no behavior summary")

    summary = behavior.get("summary") if isinstance(behavior.get("summary"), dict) else {}

    report = BehaviorReport(source_path=source_path, label=label)

    apistats = behavior.get("apistats")
    if isinstance(apistats, dict):
        for per_pid in apistats.values():
            if isinstance(per_pid, dict):
                report.api_calls.extend(
                    normalize_token(api) for api in per_pid if normalize_token(api)
                )

    created = summary.get("regkey_created")
    if not isinstance(created, list):
        created = summary.get("regkey_opened")
    report.registry_ops["create"] = _normalized_list(created)
    report.registry_ops["delete"] = _normalized_list(summary.get("regkey_deleted"))
    report.registry_ops["read"] = _normalized_list(summary.get("regkey_read"))
    report.registry_ops["write"] = _normalized_list(summary.get("regkey_written"))

    report.file_ops["create"] = _normalized_list(summary.get("file_created"))
    report.file_ops["delete"] = _normalized_list(summary.get("file_deleted"))
    report.file_ops["read"] = _normalized_list(summary.get("file_read"))
    report.file_ops["write"] = _normalized_list(summary.get("file_written"))

    report.dirs_created = _normalized_list(summary.get("directory_created"))
    report.dlls = _normalized_list(summary.get("dll_loaded"))

    network = doc.get("network")
    domains = network.get("domains") if isinstance(network, dict) else None
    if domains is None:
        domains = summary.get("domains")
    report.net_domains = _normalized_list(domains)

    dropped = doc.get("dropped")
    if dropped is None:
        dropped = summary.get("dropped")
    report.drops = _normalized_list(dropped)
    report.drop_extensions = [e for e in (_extension_of(d) for d in report.drops) if e]

    strings = doc.get("strings")
    if strings is None:
        strings = summary.get("strings")
    report.strings = _normalized_list(strings)

    return report


def parse_report_file(path: str | Path, label: str | None = None) -> BehaviorReport:
    return parse_report(Path(path).read_text(encoding="utf-8"), source_path=str(path), label=label)
