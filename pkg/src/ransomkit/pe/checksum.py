"""The standard PE image checksum.

The algorithm folds the image, read as little-endian 16-bit words with the
4-byte CheckSum field zeroed, into a ones-complement sum, then adds the
file length. An odd trailing byte is padded with zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from ransomkit.pe.parser import ParsedPE, RawImage

CHECKSUM_FIELD_REL_OFFSET = 64  # from the start of the optional header


@dataclass
class ChecksumResult:
    stored: int
    computed: int
    matches: bool


def compute_checksum(data: bytes, checksum_field_offset: int) -> int:
    """Checksum of `data` with the 4 bytes at `checksum_field_offset` zeroed."""
    total = 0
    skip = range(checksum_field_offset, checksum_field_offset + 4)
    n = len(data)
    for i in range(0, n - 1, 2):
        lo = 0 if i in skip else data[i]
        hi = 0 if i + 1 in skip else data[i + 1]
        total += lo | (hi << 8)
        total = (total & 0xFFFF) + (total >> 16)
    if n % 2:
        total += 0 if n - 1 in skip else data[n - 1]
        total = (total & 0xFFFF) + (total >> 16)
    total = (total & 0xFFFF) + (total >> 16)
    return (total + n) & 0xFFFFFFFF


def validate_checksum(pe: ParsedPE, image: RawImage | bytes) -> ChecksumResult:
    """Compare the stored CheckSum field against the recomputed value."""
    data = image.data if isinstance(image, RawImage) else image
    field_off = pe.optional_header_offset + CHECKSUM_FIELD_REL_OFFSET
    computed = compute_checksum(data, field_off)
    stored = pe.optional.CheckSum
    return ChecksumResult(stored=stored, computed=computed, matches=stored == computed)
