"""Byte-level builder for synthetic PE images.

Used to manufacture test corpora: every header field is chosen up front,
serialized with `struct`, and reported back through `expected()` so a
round-trip against the parser checks bit-exact extraction. The builder is
written independently of `ransomkit.pe.parser` (it only serializes) and its
checksum routine uses 32-bit word summation with terminal folding, a
deliberately different formulation from the validator's incremental 16-bit
fold.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

_ALIGN = lambda x, a: (x + a - 1) // a * a  # noqa: E731

_DOS_DEFAULTS = {
    "e_cblp": 0x90, "e_cp": 3, "e_crlc": 0, "e_cparhdr": 4,
    "e_minalloc": 0, "e_maxalloc": 0xFFFF, "e_ss": 0, "e_sp": 0xB8,
    "e_csum": 0, "e_ip": 0, "e_cs": 0, "e_lfarlc": 0x40, "e_ovno": 0,
    "e_oemid": 0, "e_oeminfo": 0,
}

_LOAD_CONFIG_NAMES = (
    "Size", "TimeDateStamp", "MajorVersion", "MinorVersion",
    "GlobalFlagsClear", "GlobalFlagsSet", "CriticalSectionDefaultTimeout",
    "DeCommitFreeBlockThreshold", "DeCommitTotalFreeThreshold",
    "LockPrefixTable", "MaximumAllocationSize", "VirtualMemoryThreshold",
    "SecurityCookie",
)


def builder_checksum(data: bytes, checksum_offset: int) -> int:
    """Image checksum via 32-bit word summation, folded to 16 bits at the end."""
    buf = bytearray(data)
    buf[checksum_offset : checksum_offset + 4] = b"\x00\x00\x00\x00"
    if len(buf) % 4:
        buf.extend(b"\x00" * (4 - len(buf) % 4))
    total = sum(struct.unpack_from(f"<{len(buf) // 4}I", bytes(buf)))
    while total > 0xFFFF:
        total = (total & 0xFFFF) + (total >> 16)
    return (total + len(data)) & 0xFFFFFFFF


@dataclass
class SectionContent:
    name: str = ".text"
    data: bytes = b""
    characteristics: int = 0x60000020  # code, execute, read
    virtual_size: int | None = None


@dataclass
class SyntheticPe:
    """One synthetic image: chosen values in, bytes and ground truth out."""

    pe32_plus: bool = False
    e_lfanew: int = 0x80
    dos: dict[str, int] = field(default_factory=dict)
    coff: dict[str, int] = field(default_factory=dict)
    optional: dict[str, int] = field(default_factory=dict)
    e_res: tuple[int, ...] = (0, 0, 0, 0)
    e_res2: tuple[int, ...] = (0,) * 10
    sections: list[SectionContent] = field(default_factory=list)
    resources: list[tuple[int, int, int, int]] = field(default_factory=list)  # (type, name, lang, payload_len)
    load_config: dict[str, int] | None = None
    import_dir_size: int = 0
    export_dir_size: int = 0
    checksum: int | str = "auto"

    def __post_init__(self) -> None:
        self._image: bytes | None = None
        self._expected: dict[str, float] = {}

    # --- serialization -------------------------------------------------

    def _dos_bytes(self) -> bytes:
        d = dict(_DOS_DEFAULTS, **self.dos)
        out = struct.pack(
            "<16H", 0x5A4D, d["e_cblp"], d["e_cp"], d["e_crlc"], d["e_cparhdr"],
            d["e_minalloc"], d["e_maxalloc"], d["e_ss"], d["e_sp"], d["e_csum"],
            d["e_ip"], d["e_cs"], d["e_lfarlc"], d["e_ovno"], *self.e_res[:2],
        )
        out += struct.pack("<2H", *self.e_res[2:])
        out += struct.pack("<2H", d["e_oemid"], d["e_oeminfo"])
        out += struct.pack("<10H", *self.e_res2)
        out += struct.pack("<I", self.e_lfanew)
        assert len(out) == 64
        for k, val in d.items():
            self._expected[k] = float(val)
        self._expected["e_magic"] = float(0x5A4D)
        self._expected["e_lfanew"] = float(self.e_lfanew)
        self._expected["e_res_sum"] = float(sum(self.e_res) + sum(self.e_res2))
        return out

    def _optional_bytes(self, opt: dict[str, int]) -> bytes:
        plus = self.pe32_plus
        out = struct.pack(
            "<HBB", opt["Magic"], opt["MajorLinkerVersion"], opt["MinorLinkerVersion"]
        )
        out += struct.pack(
            "<6I", opt["SizeOfCode"], opt["SizeOfInitializedData"],
            opt["SizeOfUninitializedData"], opt["AddressOfEntryPoint"],
            opt["BaseOfCode"], opt.get("BaseOfData", 0) if not plus else 0,
        )
        if plus:
            # no BaseOfData in PE32+; ImageBase widens to 8 bytes
            out = out[:-4] + struct.pack("<Q", opt["ImageBase"])
        else:
            out = out[:-4] + struct.pack("<2I", opt.get("BaseOfData", 0), opt["ImageBase"])
        out += struct.pack(
            "<2I6H4I2H",
            opt["SectionAlignment"], opt["FileAlignment"],
            opt["MajorOperatingSystemVersion"], opt["MinorOperatingSystemVersion"],
            opt["MajorImageVersion"], opt["MinorImageVersion"],
            opt["MajorSubsystemVersion"], opt["MinorSubsystemVersion"],
            opt.get("Win32VersionValue", 0), opt["SizeOfImage"],
            opt["SizeOfHeaders"], opt["CheckSum"],
            opt["Subsystem"], opt["DllCharacteristics"],
        )
        wide = "Q" if plus else "I"
        out += struct.pack(
            f"<4{wide}2I",
            opt["SizeOfStackReserve"], opt["SizeOfStackCommit"],
            opt["SizeOfHeapReserve"], opt["SizeOfHeapCommit"],
            opt["LoaderFlags"], opt["NumberOfRvaAndSizes"],
        )
        assert len(out) == (112 if plus else 96)
        return out

    def _resource_bytes(self, section_va: int) -> bytes:
        """Serialize a three-level (type/name/lang) resource tree."""
        tree: dict[int, dict[int, list[tuple[int, int]]]] = {}
        for type_id, name_id, lang_id, size in self.resources:
            tree.setdefault(type_id, {}).setdefault(name_id, []).append((lang_id, size))

        def dir_size(n_entries: int) -> int:
            return 16 + 8 * n_entries

        # lay out: root dir, type dirs, name dirs, data entries, payloads
        offset = dir_size(len(tree))
        type_offsets, name_offsets, data_offsets = {}, {}, {}
        for type_id, names in sorted(tree.items()):
            type_offsets[type_id] = offset
            offset += dir_size(len(names))
        for type_id, names in sorted(tree.items()):
            for name_id, langs in sorted(names.items()):
                name_offsets[(type_id, name_id)] = offset
                offset += dir_size(len(langs))
        for type_id, names in sorted(tree.items()):
            for name_id, langs in sorted(names.items()):
                for lang_id, _size in sorted(langs):
                    data_offsets[(type_id, name_id, lang_id)] = offset
                    offset += 16
        payload_offset = offset

        def dir_header(n: int) -> bytes:
            return struct.pack("<IIHHHH", 0, 0, 0, 0, 0, n)

        out = bytearray()
        out += dir_header(len(tree))
        for type_id in sorted(tree):
            out += struct.pack("<II", type_id, 0x80000000 | type_offsets[type_id])
        for type_id, names in sorted(tree.items()):
            out += dir_header(len(names))
            for name_id in sorted(names):
                out += struct.pack("<II", name_id, 0x80000000 | name_offsets[(type_id, name_id)])
        for type_id, names in sorted(tree.items()):
            for name_id, langs in sorted(names.items()):
                out += dir_header(len(langs))
                for lang_id, _size in sorted(langs):
                    out += struct.pack("<II", lang_id, data_offsets[(type_id, name_id, lang_id)])
        payloads = bytearray()
        for type_id, names in sorted(tree.items()):
            for name_id, langs in sorted(names.items()):
                for lang_id, size in sorted(langs):
                    rva = section_va + payload_offset + len(payloads)
                    out += struct.pack("<IIII", rva, size, 0, 0)
                    payloads += bytes((7 * i + 13) & 0xFF for i in range(size))
        out += payloads
        return bytes(out)

    def _load_config_bytes(self) -> bytes:
        lc = {name: 0 for name in _LOAD_CONFIG_NAMES}
        lc.update(self.load_config or {})
        plus = self.pe32_plus
        total = 96 if plus else 64
        buf = bytearray(total)
        struct.pack_into("<IIHHIII", buf, 0, lc["Size"], lc["TimeDateStamp"],
                         lc["MajorVersion"], lc["MinorVersion"], lc["GlobalFlagsClear"],
                         lc["GlobalFlagsSet"], lc["CriticalSectionDefaultTimeout"])
        wide = "Q" if plus else "I"
        struct.pack_into(f"<5{wide}", buf, 24, lc["DeCommitFreeBlockThreshold"],
                         lc["DeCommitTotalFreeThreshold"], lc["LockPrefixTable"],
                         lc["MaximumAllocationSize"], lc["VirtualMemoryThreshold"])
        struct.pack_into(f"<{wide}", buf, 88 if plus else 60, lc["SecurityCookie"])
        for name in _LOAD_CONFIG_NAMES:
            self._expected[f"load_config_{name}"] = float(lc[name])
        return bytes(buf)

    def build(self) -> bytes:
        if self._image is not None:
            return self._image
        self._expected = {}
        plus = self.pe32_plus

        sections = list(self.sections)
        rsrc_index = lc_index = None
        if self.resources:
            rsrc_index = len(sections)
            sections.append(SectionContent(name=".rsrc", data=b"", characteristics=0x40000040))
        if self.load_config is not None:
            lc_index = len(sections)
            sections.append(SectionContent(name=".lcfg", data=self._load_config_bytes(),
                                           characteristics=0x40000040))
        else:
            # absent directory extracts as all-zero load config features
            for name in _LOAD_CONFIG_NAMES:
                self._expected[f"load_config_{name}"] = 0.0

        opt = self._default_optional(len(sections))
        file_align = opt["FileAlignment"]
        sect_align = opt["SectionAlignment"]

        headers_end = self.e_lfanew + 4 + 20 + (112 if plus else 96) + 16 * 8 + 40 * len(sections)
        opt.setdefault("SizeOfHeaders", _ALIGN(headers_end, file_align))

        # assign virtual addresses and raw offsets; cap the VA base so an
        # arbitrary SizeOfHeaders cannot overflow the 32-bit section fields
        va = _ALIGN(max(min(opt["SizeOfHeaders"], 1 << 20), sect_align), sect_align)
        raw = _ALIGN(headers_end, file_align)
        placements: list[dict] = []
        for idx, sec in enumerate(sections):
            if idx == rsrc_index:
                sec.data = self._resource_bytes(va)
            vsize = sec.virtual_size if sec.virtual_size is not None else len(sec.data)
            placements.append({"sec": sec, "va": va, "raw": raw, "rawsize": len(sec.data)})
            va = _ALIGN(va + max(vsize, 1), sect_align)
            raw = _ALIGN(raw + len(sec.data), file_align)

        opt.setdefault("SizeOfImage", va)
        first_va = placements[0]["va"] if placements else sect_align
        opt.setdefault("AddressOfEntryPoint", first_va)
        opt.setdefault("BaseOfCode", first_va)

        dirs = [(0, 0)] * 16
        dirs[0] = (0, self.export_dir_size)
        dirs[1] = (0, self.import_dir_size)
        if rsrc_index is not None:
            dirs[2] = (placements[rsrc_index]["va"], placements[rsrc_index]["rawsize"])
        if lc_index is not None:
            dirs[10] = (placements[lc_index]["va"], placements[lc_index]["rawsize"])

        coff = {
            "Machine": 0x8664 if plus else 0x14C,
            "NumberOfSections": len(sections),
            "TimeDateStamp": 0,
            "PointerToSymbolTable": 0,
            "NumberOfSymbols": 0,
            "SizeOfOptionalHeader": (112 if plus else 96) + 16 * 8,
            "Characteristics": 0x0102,
        }
        coff.update(self.coff)
        coff["NumberOfSections"] = len(sections)

        image = bytearray(self._dos_bytes())
        image += b"\x00" * (self.e_lfanew - len(image))
        image += b"PE\x00\x00"
        image += struct.pack(
            "<2H3I2H", coff["Machine"], coff["NumberOfSections"], coff["TimeDateStamp"],
            coff["PointerToSymbolTable"], coff["NumberOfSymbols"],
            coff["SizeOfOptionalHeader"], coff["Characteristics"],
        )
        checksum_field_off = len(image) + 64
        image += self._optional_bytes(opt)
        for rva, size in dirs:
            image += struct.pack("<II", rva, size)
        for p in placements:
            name_bytes = p["sec"].name.encode("ascii")[:8].ljust(8, b"\x00")
            vsize = p["sec"].virtual_size if p["sec"].virtual_size is not None else len(p["sec"].data)
            image += name_bytes + struct.pack(
                "<6I2HI", vsize, p["va"], p["rawsize"], p["raw"], 0, 0, 0, 0,
                p["sec"].characteristics,
            )
        for p in placements:
            image += b"\x00" * (p["raw"] - len(image))
            image += p["sec"].data
        if placements:
            image += b"\x00" * (_ALIGN(len(image), file_align) - len(image))

        if self.checksum == "auto":
            stored = builder_checksum(bytes(image), checksum_field_off)
        else:
            stored = int(self.checksum)
        struct.pack_into("<I", image, checksum_field_off, stored)
        opt["CheckSum"] = stored

        for name, val in opt.items():
            if name not in ("BaseOfData", "Win32VersionValue", "MinorOperatingSystemVersion",
                            "MinorSubsystemVersion"):
                self._expected[name] = float(val)
        for name, val in coff.items():
            self._expected[name] = float(val)
        self._expected["import_dir_size"] = float(self.import_dir_size)
        self._expected["export_dir_size"] = float(self.export_dir_size)
        self._expected["section_count"] = float(len(sections))
        self._expected["section_executable_count"] = float(
            sum(bool(p["sec"].characteristics & 0x20000000) for p in placements))
        self._expected["section_writable_count"] = float(
            sum(bool(p["sec"].characteristics & 0x80000000) for p in placements))
        self._expected["zero_size_section_count"] = float(
            sum(p["rawsize"] == 0 for p in placements))
        self._expected["resource_entry_count"] = float(len(self.resources))
        self._expected["resource_total_size"] = float(sum(r[3] for r in self.resources))
        self._expected["resource_max_size"] = float(max((r[3] for r in self.resources), default=0))
        self._expected["resource_depth"] = 3.0 if self.resources else 0.0

        self._image = bytes(image)
        return self._image

    def _default_optional(self, n_sections: int) -> dict[str, int]:
        plus = self.pe32_plus
        opt = {
            "Magic": 0x20B if plus else 0x10B,
            "MajorLinkerVersion": 14, "MinorLinkerVersion": 0,
            "SizeOfCode": 0x200, "SizeOfInitializedData": 0x200,
            "SizeOfUninitializedData": 0,
            "ImageBase": 0x140000000 if plus else 0x400000,
            "SectionAlignment": 0x1000, "FileAlignment": 0x200,
            "MajorOperatingSystemVersion": 6, "MinorOperatingSystemVersion": 0,
            "MajorImageVersion": 0, "MinorImageVersion": 0,
            "MajorSubsystemVersion": 6, "MinorSubsystemVersion": 0,
            "CheckSum": 0, "Subsystem": 2, "DllCharacteristics": 0x8140,
            "SizeOfStackReserve": 0x100000, "SizeOfStackCommit": 0x1000,
            "SizeOfHeapReserve": 0x100000, "SizeOfHeapCommit": 0x1000,
            "LoaderFlags": 0, "NumberOfRvaAndSizes": 16,
        }
        opt.update(self.optional)
        opt["NumberOfRvaAndSizes"] = 16
        opt["Magic"] = 0x20B if plus else 0x10B
        return opt

    def expected(self) -> dict[str, float]:
        """Ground-truth feature values for every directly-read field."""
        self.build()
        return dict(self._expected)


def random_synthetic_pe(rng: np.random.Generator) -> SyntheticPe:
    """A structurally valid image with randomized header values everywhere."""
    def u16() -> int:
        return int(rng.integers(0, 0x10000))

    def u32() -> int:
        return int(rng.integers(0, 2**32))

    plus = bool(rng.integers(0, 2))
    n_sections = int(rng.integers(1, 4))
    sections = [
        SectionContent(
            name=f".s{i}",
            data=rng.integers(0, 256, size=int(rng.integers(16, 2048)), dtype=np.uint8).tobytes(),
            characteristics=int(rng.choice([0x60000020, 0xC0000040, 0x40000040])),
        )
        for i in range(n_sections)
    ]
    resources = [
        (int(rng.integers(1, 25)), int(rng.integers(1, 100)), int(rng.integers(0, 3)),
         int(rng.integers(8, 512)))
        for _ in range(int(rng.integers(0, 5)))
    ]
    # distinct (type, name, lang) triples only; duplicates would merge
    resources = list({r[:3]: r for r in resources}.values())
    load_config = None
    if rng.integers(0, 2):
        load_config = {
            "Size": 96 if plus else 64, "TimeDateStamp": u32(),
            "MajorVersion": u16(), "MinorVersion": u16(),
            "GlobalFlagsClear": u32(), "GlobalFlagsSet": u32(),
            "CriticalSectionDefaultTimeout": u32(),
            "DeCommitFreeBlockThreshold": u32(), "DeCommitTotalFreeThreshold": u32(),
            "LockPrefixTable": u32(), "MaximumAllocationSize": u32(),
            "VirtualMemoryThreshold": u32(), "SecurityCookie": u32(),
        }
    return SyntheticPe(
        pe32_plus=plus,
        e_lfanew=int(rng.integers(8, 25)) * 8,
        dos={k: u16() for k in _DOS_DEFAULTS},
        e_res=tuple(u16() for _ in range(4)),
        e_res2=tuple(u16() for _ in range(10)),
        coff={
            "TimeDateStamp": u32(),
            "PointerToSymbolTable": u32(),
            "NumberOfSymbols": u32(),
            "Characteristics": u16(),
        },
        optional={
            "MajorLinkerVersion": int(rng.integers(0, 256)),
            "MinorLinkerVersion": int(rng.integers(0, 256)),
            "SizeOfCode": u32(), "SizeOfInitializedData": u32(),
            "SizeOfUninitializedData": u32(),
            "MajorOperatingSystemVersion": u16(), "MajorImageVersion": u16(),
            "MinorImageVersion": u16(), "MajorSubsystemVersion": u16(),
            "Subsystem": u16(), "DllCharacteristics": u16(),
            "SizeOfStackReserve": u32(), "SizeOfStackCommit": u32(),
            "SizeOfHeapReserve": u32(), "SizeOfHeapCommit": u32(),
            "LoaderFlags": u32(),
            "SizeOfImage": u32(), "AddressOfEntryPoint": u32(),
            "BaseOfCode": u32(),
            "SizeOfHeaders": int(rng.integers(1, 64)) * 0x200,
        },
        sections=sections,
        resources=resources,
        load_config=load_config,
        import_dir_size=u16(),
        export_dir_size=u16(),
    )
