"""Byte-exact PE header parsing.

Reads the DOS header, COFF file header, optional header (PE32 and PE32+),
section table and the resource / load-config data directories straight from
the raw bytes with `struct`. No third-party PE library is involved, so the
parser tolerates the deliberately malformed images malware ships: anything
that is structurally readable parses with warnings instead of failing.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

from ransomkit.errors import (
    BadPeOffsetError,
    MalformedDosError,
    MissingPeSignatureError,
    TruncatedHeaderError,
)

DOS_MAGIC = 0x5A4D  # "MZ"
PE_SIGNATURE = b"PE\x00\x00"
PE32_MAGIC = 0x10B
PE32PLUS_MAGIC = 0x20B

DIR_EXPORT = 0
DIR_IMPORT = 1
DIR_RESOURCE = 2
DIR_LOAD_CONFIG = 10

SCN_MEM_EXECUTE = 0x20000000
SCN_MEM_WRITE = 0x80000000

DOS_FIELD_NAMES = (
    "e_magic", "e_cblp", "e_cp", "e_crlc", "e_cparhdr", "e_minalloc",
    "e_maxalloc", "e_ss", "e_sp", "e_csum", "e_ip", "e_cs", "e_lfarlc",
    "e_ovno", "e_oemid", "e_oeminfo", "e_lfanew",
)

LOAD_CONFIG_FIELD_NAMES = (
    "Size", "TimeDateStamp", "MajorVersion", "MinorVersion",
    "GlobalFlagsClear", "GlobalFlagsSet", "CriticalSectionDefaultTimeout",
    "DeCommitFreeBlockThreshold", "DeCommitTotalFreeThreshold",
    "LockPrefixTable", "MaximumAllocationSize", "VirtualMemoryThreshold",
    "SecurityCookie",
)


@dataclass
class RawImage:
    """A file's bytes plus where they came from."""

    data: bytes
    source_path: str = "<memory>"

    @classmethod
    def from_file(cls, path: str | Path) -> "RawImage":
        return cls(data=Path(path).read_bytes(), source_path=str(path))


@dataclass
class DosHeader:
    e_magic: int
    e_cblp: int
    e_cp: int
    e_crlc: int
    e_cparhdr: int
    e_minalloc: int
    e_maxalloc: int
    e_ss: int
    e_sp: int
    e_csum: int
    e_ip: int
    e_cs: int
    e_lfarlc: int
    e_ovno: int
    e_oemid: int
    e_oeminfo: int
    e_lfanew: int
    e_res_sum: int  # sum of the 14 reserved words (e_res + e_res2)


@dataclass
class CoffFileHeader:
    Machine: int
    NumberOfSections: int
    TimeDateStamp: int
    PointerToSymbolTable: int
    NumberOfSymbols: int
    SizeOfOptionalHeader: int
    Characteristics: int


@dataclass
class OptionalHeader:
    Magic: int
    MajorLinkerVersion: int
    MinorLinkerVersion: int
    SizeOfCode: int
    SizeOfInitializedData: int
    SizeOfUninitializedData: int
    AddressOfEntryPoint: int
    BaseOfCode: int
    ImageBase: int
    SectionAlignment: int
    FileAlignment: int
    MajorOperatingSystemVersion: int
    MajorImageVersion: int
    MinorImageVersion: int
    MajorSubsystemVersion: int
    SizeOfImage: int
    SizeOfHeaders: int
    CheckSum: int
    Subsystem: int
    DllCharacteristics: int
    SizeOfStackReserve: int
    SizeOfStackCommit: int
    SizeOfHeapReserve: int
    SizeOfHeapCommit: int
    LoaderFlags: int
    NumberOfRvaAndSizes: int

    @property
    def is_pe32_plus(self) -> bool:
        return self.Magic == PE32PLUS_MAGIC


@dataclass
class SectionHeader:
    name: str
    VirtualSize: int
    VirtualAddress: int
    SizeOfRawData: int
    PointerToRawData: int
    Characteristics: int

    @property
    def executable(self) -> bool:
        return bool(self.Characteristics & SCN_MEM_EXECUTE)

    @property
    def writable(self) -> bool:
        return bool(self.Characteristics & SCN_MEM_WRITE)


@dataclass
class DataDirectory:
    rva: int
    size: int


@dataclass
class ResourceSummary:
    entry_count: int = 0
    total_size: int = 0
    max_size: int = 0
    depth: int = 0
    present: bool = False


@dataclass
class LoadConfigSummary:
    values: dict[str, int] = field(default_factory=dict)
    present: bool = False

    def __post_init__(self) -> None:
        if not self.values:
            self.values = {name: 0 for name in LOAD_CONFIG_FIELD_NAMES}


@dataclass
class ParsedPE:
    dos: DosHeader
    coff: CoffFileHeader
    optional: OptionalHeader
    sections: list[SectionHeader]
    data_directories: list[DataDirectory]
    resources: ResourceSummary
    load_config: LoadConfigSummary
    optional_header_offset: int
    warnings: list[str] = field(default_factory=list)


def _u8(data: bytes, off: int) -> int:
    return data[off]


def _u16(data: bytes, off: int) -> int:
    return struct.unpack_from("<H", data, off)[0]


def _u32(data: bytes, off: int) -> int:
    return struct.unpack_from("<I", data, off)[0]


def _u64(data: bytes, off: int) -> int:
    return struct.unpack_from("<Q", data, off)[0]


def _require(data: bytes, off: int, size: int, what: str) -> None:
    if off < 0 or off + size > len(data):
        raise TruncatedHeaderError(f"file ends inside {what}", offset=off)


def _parse_dos(data: bytes) -> DosHeader:
    _require(data, 0, 64, "DOS header")
    e_magic = _u16(data, 0)
    if e_magic != DOS_MAGIC:
        raise MalformedDosError("no MZ magic", offset=0)
    words = [_u16(data, 2 * i) for i in range(30)]
    # words 14..17 are e_res, 20..29 are e_res2; e_oemid/e_oeminfo sit between
    e_res_sum = sum(words[14:18]) + sum(words[20:30])
    fields = dict(zip(DOS_FIELD_NAMES[:14], words[:14]))
    fields["e_oemid"] = words[18]
    fields["e_oeminfo"] = words[19]
    fields["e_lfanew"] = _u32(data, 0x3C)
    return DosHeader(e_res_sum=e_res_sum, **fields)


def _parse_coff(data: bytes, off: int) -> CoffFileHeader:
    _require(data, off, 20, "COFF file header")
    return CoffFileHeader(
        Machine=_u16(data, off),
        NumberOfSections=_u16(data, off + 2),
        TimeDateStamp=_u32(data, off + 4),
        PointerToSymbolTable=_u32(data, off + 8),
        NumberOfSymbols=_u32(data, off + 12),
        SizeOfOptionalHeader=_u16(data, off + 16),
        Characteristics=_u16(data, off + 18),
    )


def _parse_optional(data: bytes, off: int, warnings: list[str]) -> OptionalHeader:
    _require(data, off, 2, "optional header magic")
    magic = _u16(data, off)
    if magic not in (PE32_MAGIC, PE32PLUS_MAGIC):
        warnings.append(f"unknown optional header magic {magic:#x}, assuming PE32 layout")
    plus = magic == PE32PLUS_MAGIC
    _require(data, off, 112 if plus else 96, "optional header")
    if plus:
        image_base = _u64(data, off + 24)
        stack_reserve = _u64(data, off + 72)
        stack_commit = _u64(data, off + 80)
        heap_reserve = _u64(data, off + 88)
        heap_commit = _u64(data, off + 96)
        loader_flags = _u32(data, off + 104)
        num_rva = _u32(data, off + 108)
    else:
        image_base = _u32(data, off + 28)
        stack_reserve = _u32(data, off + 72)
        stack_commit = _u32(data, off + 76)
        heap_reserve = _u32(data, off + 80)
        heap_commit = _u32(data, off + 84)
        loader_flags = _u32(data, off + 88)
        num_rva = _u32(data, off + 92)
    return OptionalHeader(
        Magic=magic,
        MajorLinkerVersion=_u8(data, off + 2),
        MinorLinkerVersion=_u8(data, off + 3),
        SizeOfCode=_u32(data, off + 4),
        SizeOfInitializedData=_u32(data, off + 8),
        SizeOfUninitializedData=_u32(data, off + 12),
        AddressOfEntryPoint=_u32(data, off + 16),
        BaseOfCode=_u32(data, off + 20),
        ImageBase=image_base,
        SectionAlignment=_u32(data, off + 32),
        FileAlignment=_u32(data, off + 36),
        MajorOperatingSystemVersion=_u16(data, off + 40),
        MajorImageVersion=_u16(data, off + 44),
        MinorImageVersion=_u16(data, off + 46),
        MajorSubsystemVersion=_u16(data, off + 48),
        SizeOfImage=_u32(data, off + 56),
        SizeOfHeaders=_u32(data, off + 60),
        CheckSum=_u32(data, off + 64),
        Subsystem=_u16(data, off + 68),
        DllCharacteristics=_u16(data, off + 70),
        SizeOfStackReserve=stack_reserve,
        SizeOfStackCommit=stack_commit,
        SizeOfHeapReserve=heap_reserve,
        SizeOfHeapCommit=heap_commit,
        LoaderFlags=loader_flags,
        NumberOfRvaAndSizes=num_rva,
    )


def _parse_data_directories(
    data: bytes, opt_off: int, opt_end: int, opt: OptionalHeader, warnings: list[str]
) -> list[DataDirectory]:
    dd_off = opt_off + (112 if opt.is_pe32_plus else 96)
    count = min(opt.NumberOfRvaAndSizes, 16)
    if opt.NumberOfRvaAndSizes > 16:
        warnings.append(f"NumberOfRvaAndSizes {opt.NumberOfRvaAndSizes} clamped to 16")
    limit = min(len(data), opt_end)  # directories live inside SizeOfOptionalHeader
    dirs: list[DataDirectory] = []
    for i in range(count):
        off = dd_off + 8 * i
        if off + 8 > limit:
            warnings.append("data directory table truncated")
            break
        dirs.append(DataDirectory(rva=_u32(data, off), size=_u32(data, off + 4)))
    while len(dirs) < 16:
        dirs.append(DataDirectory(0, 0))
    return dirs


def _parse_sections(
    data: bytes, off: int, count: int, warnings: list[str]
) -> list[SectionHeader]:
    sections: list[SectionHeader] = []
    for i in range(count):
        sh = off + 40 * i
        _require(data, sh, 40, f"section header {i}")
        raw_name = data[sh : sh + 8]
        sections.append(
            SectionHeader(
                name=raw_name.split(b"\x00", 1)[0].decode("ascii", errors="replace"),
                VirtualSize=_u32(data, sh + 8),
                VirtualAddress=_u32(data, sh + 12),
                SizeOfRawData=_u32(data, sh + 16),
                PointerToRawData=_u32(data, sh + 20),
                Characteristics=_u32(data, sh + 36),
            )
        )
    return sections


def rva_to_offset(rva: int, sections: list[SectionHeader], file_len: int) -> int | None:
    """Map a relative virtual address to a file offset via the section table.

    Falls back to identity below the first section (headers are mapped 1:1).
    Returns None when the RVA lands nowhere in the file.
    """
    if rva < 0:
        return None
    first_va = min((s.VirtualAddress for s in sections if s.VirtualAddress), default=None)
    for s in sections:
        span = max(s.VirtualSize, s.SizeOfRawData)
        if span and s.VirtualAddress <= rva < s.VirtualAddress + span:
            off = s.PointerToRawData + (rva - s.VirtualAddress)
            return off if 0 <= off < file_len else None
    if first_va is None or rva < first_va:
        return rva if rva < file_len else None
    return None


def _walk_resources(
    data: bytes, base: int, sections: list[SectionHeader], warnings: list[str]
) -> ResourceSummary:
    """Walk the resource tree, counting leaf data entries and nesting depth."""
    summary = ResourceSummary(present=True)
    seen_dirs: set[int] = set()

    def walk(dir_rel: int, depth: int) -> None:
        if dir_rel in seen_dirs or len(seen_dirs) > 4096:
            warnings.append("resource directory loop or excessive size")
            return
        seen_dirs.add(dir_rel)
        off = base + dir_rel
        if off + 16 > len(data):
            warnings.append("resource directory truncated")
            return
        summary.depth = max(summary.depth, depth)
        n_named = _u16(data, off + 12)
        n_id = _u16(data, off + 14)
        for i in range(n_named + n_id):
            ent = off + 16 + 8 * i
            if ent + 8 > len(data):
                warnings.append("resource entry truncated")
                return
            target = _u32(data, ent + 4)
            if target & 0x80000000:
                walk(target & 0x7FFFFFFF, depth + 1)
            else:
                de = base + (target & 0x7FFFFFFF)
                if de + 16 > len(data):
                    warnings.append("resource data entry truncated")
                    continue
                size = _u32(data, de + 4)
                summary.entry_count += 1
                summary.total_size += size
                summary.max_size = max(summary.max_size, size)

    walk(0, 1)
    return summary


_LOAD_CONFIG_LAYOUT_32 = (
    ("Size", 0, 4), ("TimeDateStamp", 4, 4), ("MajorVersion", 8, 2),
    ("MinorVersion", 10, 2), ("GlobalFlagsClear", 12, 4), ("GlobalFlagsSet", 16, 4),
    ("CriticalSectionDefaultTimeout", 20, 4), ("DeCommitFreeBlockThreshold", 24, 4),
    ("DeCommitTotalFreeThreshold", 28, 4), ("LockPrefixTable", 32, 4),
    ("MaximumAllocationSize", 36, 4), ("VirtualMemoryThreshold", 40, 4),
    ("SecurityCookie", 60, 4),
)

_LOAD_CONFIG_LAYOUT_64 = (
    ("Size", 0, 4), ("TimeDateStamp", 4, 4), ("MajorVersion", 8, 2),
    ("MinorVersion", 10, 2), ("GlobalFlagsClear", 12, 4), ("GlobalFlagsSet", 16, 4),
    ("CriticalSectionDefaultTimeout", 20, 4), ("DeCommitFreeBlockThreshold", 24, 8),
    ("DeCommitTotalFreeThreshold", 32, 8), ("LockPrefixTable", 40, 8),
    ("MaximumAllocationSize", 48, 8), ("VirtualMemoryThreshold", 56, 8),
    ("SecurityCookie", 88, 8),
)


def _parse_load_config(
    data: bytes, base: int, plus: bool, warnings: list[str]
) -> LoadConfigSummary:
    layout = _LOAD_CONFIG_LAYOUT_64 if plus else _LOAD_CONFIG_LAYOUT_32
    values: dict[str, int] = {}
    for name, rel, width in layout:
        off = base + rel
        if off + width > len(data):
            warnings.append(f"load config field {name} beyond end of file")
            values[name] = 0
        else:
            values[name] = _u32(data, off) if width == 4 else (
                _u16(data, off) if width == 2 else _u64(data, off)
            )
    return LoadConfigSummary(values=values, present=True)


def parse_pe(image: RawImage | bytes) -> ParsedPE:
    """Parse a PE image into its header structures.

    Raises MalformedDosError, BadPeOffsetError, MissingPeSignatureError or
    TruncatedHeaderError, each carrying the failing offset. Structural
    oddities that do not prevent reading (zero sections, unknown optional
    magic, unmappable directories) are recorded as warnings instead.
    """
    data = image.data if isinstance(image, RawImage) else image
    if len(data) < 64:
        raise TruncatedHeaderError("image shorter than a DOS header", offset=len(data))

    warnings: list[str] = []
    dos = _parse_dos(data)

    if dos.e_lfanew < 0 or dos.e_lfanew + 4 > len(data):
        raise BadPeOffsetError("e_lfanew outside file", offset=dos.e_lfanew)
    if data[dos.e_lfanew : dos.e_lfanew + 4] != PE_SIGNATURE:
        raise MissingPeSignatureError("PE signature not found", offset=dos.e_lfanew)

    coff = _parse_coff(data, dos.e_lfanew + 4)
    if coff.NumberOfSections == 0:
        warnings.append("NumberOfSections is 0")

    opt_off = dos.e_lfanew + 24
    optional = _parse_optional(data, opt_off, warnings)
    for name in ("FileAlignment", "SectionAlignment"):
        value = getattr(optional, name)
        if value and value & (value - 1):
            warnings.append(f"{name} {value:#x} is not a power of two")
    sect_off = opt_off + coff.SizeOfOptionalHeader
    dirs = _parse_data_directories(data, opt_off, sect_off, optional, warnings)
    sections = _parse_sections(data, sect_off, coff.NumberOfSections, warnings)

    resources = ResourceSummary()
    rsrc_dir = dirs[DIR_RESOURCE]
    if rsrc_dir.rva and rsrc_dir.size:
        base = rva_to_offset(rsrc_dir.rva, sections, len(data))
        if base is None:
            warnings.append("resource directory RVA unmappable")
        else:
            resources = _walk_resources(data, base, sections, warnings)

    load_config = LoadConfigSummary()
    lc_dir = dirs[DIR_LOAD_CONFIG]
    if lc_dir.rva and lc_dir.size:
        base = rva_to_offset(lc_dir.rva, sections, len(data))
        if base is None:
            warnings.append("load config directory RVA unmappable")
        else:
            load_config = _parse_load_config(data, base, optional.is_pe32_plus, warnings)

    return ParsedPE(
        dos=dos,
        coff=coff,
        optional=optional,
        sections=sections,
        data_directories=dirs,
        resources=resources,
        load_config=load_config,
        optional_header_offset=opt_off,
        warnings=warnings,
    )


def section_raw_bytes(section: SectionHeader, data: bytes) -> bytes:
    """Raw file bytes backing a section, clipped to the end of the image."""
    start = section.PointerToRawData
    end = min(start + section.SizeOfRawData, len(data))
    if start >= len(data) or end <= start:
        return b""
    return data[start:end]
