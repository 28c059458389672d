"""Synthetic corpora for tests and demos.

The real corpora behind this kind of tooling are not redistributable, so
experiments run on generated stand-ins with known planted structure:

* `synthetic_behavior_corpus` writes sandbox-style report JSON files where
  ten registry-write tokens are strongly class-discriminative, malicious
  reports repeat a fixed three-key registry-delete sequence, and benign
  delete sequences use a disjoint key pool with no repetition.
* `synthetic_pe_corpus` writes PE images where the malicious class carries
  high-entropy sections and a broken checksum.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ransomkit.manifest import LABEL_BENIGN, LABEL_MALICIOUS, ManifestEntry
from ransomkit.synth.pe_build import SectionContent, SyntheticPe

PLANTED_REGISTRY_TOKENS = tuple(
    f"hkey_local_machine\\software\\cryptsvc\\marker{i:02d}" for i in range(10)
)

PLANTED_DELETE_SEQUENCE = (
    "hkey_local_machine\\software\\shadowcopy\\a",
    "hkey_local_machine\\software\\shadowcopy\\b",
    "hkey_local_machine\\software\\shadowcopy\\c",
)

_API_POOL = [
    "NtCreateFile", "NtWriteFile", "NtReadFile", "RegOpenKeyExW", "RegSetValueExW",
    "CreateProcessW", "VirtualAlloc", "LoadLibraryW", "GetProcAddress", "CryptEncrypt",
    "CryptAcquireContextW", "FindFirstFileW", "FindNextFileW", "DeleteFileW",
    "MoveFileExW", "InternetOpenW", "HttpSendRequestW", "WriteConsoleW", "ExitProcess",
    "SetFileAttributesW", "GetSystemTimeAsFileTime", "OpenMutexW", "CreateMutexW",
    "TerminateProcess", "Sleep", "GetTickCount", "IsDebuggerPresent", "WSAStartup",
    "connect", "send", "recv", "CloseHandle", "NtQuerySystemInformation",
    "EnumProcesses", "OpenProcess", "ReadProcessMemory", "WriteProcessMemory",
    "SetWindowsHookExW", "GetAsyncKeyState", "ShellExecuteW",
]

_DLL_POOL = [
    "kernel32.dll", "ntdll.dll", "advapi32.dll", "user32.dll", "ws2_32.dll",
    "crypt32.dll", "shell32.dll", "wininet.dll", "ole32.dll", "msvcrt.dll",
    "bcrypt.dll", "rpcrt4.dll", "gdi32.dll", "shlwapi.dll", "psapi.dll", "wtsapi32.dll",
]


def _pool(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i:03d}" for i in range(n)]


_FILE_POOL = _pool("users\\*\\appdata\\local\\temp\\work", 60)
_DIR_POOL = _pool("users\\*\\appdata\\roaming\\dir", 20)
_STRING_POOL = _pool("marker_string_", 40)
_DOMAIN_POOL = [f"host{i:02d}.example.net" for i in range(20)]
_REG_BACKGROUND = _pool("hkey_current_user\\software\\app\\key", 60)
_DELETE_POOL_MAL = _pool("hkey_local_machine\\software\\malclean\\m", 15)
_DELETE_POOL_BEN = _pool("hkey_current_user\\software\\bencln\\b", 30)


def _subset(rng: np.random.Generator, pool: list[str], p: float) -> list[str]:
    mask = rng.random(len(pool)) < p
    return [tok for tok, keep in zip(pool, mask) if keep]


def _one_report(rng: np.random.Generator, malicious: bool) -> dict:
    planted = [
        tok
        for tok in PLANTED_REGISTRY_TOKENS
        if rng.random() < (0.95 if malicious else 0.02)
    ]
    written = planted + _subset(rng, _REG_BACKGROUND, 0.5)
    if malicious:
        extra = list(rng.choice(_DELETE_POOL_MAL, size=3, replace=False))
        deleted = list(PLANTED_DELETE_SEQUENCE) * 2 + extra
    else:
        deleted = list(rng.choice(_DELETE_POOL_BEN, size=5, replace=False))
    apis = _subset(rng, _API_POOL, 0.5)
    return {
        "behavior": {
            "apistats": {"1000": {api: int(rng.integers(1, 20)) for api in apis}},
            "summary": {
                "regkey_written": written,
                "regkey_deleted": deleted,
                "regkey_read": _subset(rng, _REG_BACKGROUND, 0.3),
                "regkey_opened": _subset(rng, _REG_BACKGROUND, 0.3),
                "file_created": _subset(rng, _FILE_POOL, 0.3),
                "file_written": _subset(rng, _FILE_POOL, 0.2),
                "file_read": _subset(rng, _FILE_POOL, 0.2),
                "file_deleted": _subset(rng, _FILE_POOL, 0.1),
                "directory_created": _subset(rng, _DIR_POOL, 0.3),
                "dll_loaded": _subset(rng, _DLL_POOL, 0.6),
                "strings": _subset(rng, _STRING_POOL, 0.4),
            },
        },
        "network": {"domains": [{"domain": d} for d in _subset(rng, _DOMAIN_POOL, 0.2)]},
        "dropped": [{"name": f"drop{int(rng.integers(0, 20)):02d}.{ext}"}
                    for ext in _subset(rng, ["exe", "dll", "tmp", "dat", "locked"], 0.4)],
    }


def synthetic_behavior_corpus(
    out_dir: str | Path, n_per_class: int = 100, seed: int = 0
) -> list[ManifestEntry]:
    """Write report JSON files plus nothing else; returns manifest entries."""
    rng = np.random.default_rng(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries: list[ManifestEntry] = []
    for i in range(n_per_class):
        for label, malicious in ((LABEL_MALICIOUS, True), (LABEL_BENIGN, False)):
            doc = _one_report(rng, malicious)
            path = out / f"{label}_{i:04d}.json"
            path.write_text(json.dumps(doc, indent=1), encoding="utf-8")
            entries.append(ManifestEntry(path=str(path), label=label))
    return entries


def synthetic_pe_corpus(
    out_dir: str | Path, n_per_class: int = 40, seed: int = 0
) -> list[ManifestEntry]:
    """Write PE images with a learnable class difference.

    Malicious images get near-random (high entropy) section contents, a
    deliberately wrong stored checksum and hostile-looking header values;
    benign images get low-entropy text-like content and a valid checksum.
    """
    rng = np.random.default_rng(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries: list[ManifestEntry] = []
    for i in range(n_per_class):
        for label in (LABEL_MALICIOUS, LABEL_BENIGN):
            if label == LABEL_MALICIOUS:
                content = rng.integers(0, 256, size=int(rng.integers(1024, 4096)),
                                       dtype=np.uint8).tobytes()
                builder = SyntheticPe(
                    sections=[SectionContent(name=".p", data=content,
                                             characteristics=0xE0000020)],
                    optional={"DllCharacteristics": 0,
                              "SizeOfCode": int(rng.integers(1 << 16, 1 << 24))},
                    checksum=0,
                )
            else:
                words = rng.integers(97, 105, size=int(rng.integers(1024, 4096)),
                                     dtype=np.uint8).tobytes()
                builder =SyntheticPe(
                    sections=[SectionContent(name=".text", data=words)],
                    optional={"DllCharacteristics": 0x8140,
                              "SizeOfCode": int(rng.integers(1 << 9, 1 << 12))},
                    resources=[(16, 1, 0, int(rng.integers(64, 256)))],
                )
            path = out / f"{label}_{i:04d}.exe"
            path.write_bytes(builder.build())
            entries.append(ManifestEntry(path=str(path), label=label))
    return entries
