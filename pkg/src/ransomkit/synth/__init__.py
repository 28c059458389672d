from ransomkit.synth.pe_build import SectionContent, SyntheticPe, builder_checksum, random_synthetic_pe
from ransomkit.synth.reports import (
    PLANTED_DELETE_SEQUENCE,
    PLANTED_REGISTRY_TOKENS,
    synthetic_behavior_corpus,
    synthetic_pe_corpus,
)

__all__ = [
    "SectionContent",
    "SyntheticPe",
    "builder_checksum",
    "random_synthetic_pe",
    "PLANTED_DELETE_SEQUENCE",
    "PLANTED_REGISTRY_TOKENS",
    "synthetic_behavior_corpus",
    "synthetic_pe_corpus",
]
