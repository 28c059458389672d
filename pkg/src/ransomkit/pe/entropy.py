"""Shannon entropy over a byte histogram, in bits per byte."""

from __future__ import annotations

import numpy as np


def compute_entropy(data: bytes) -> float:
    """Entropy of the byte-value distribution of `data`.

    Result is in [0, 8]; an empty input returns 0 by convention. Depends
    only on the histogram, so it is invariant under permutation of the
    bytes.
    """
    if not data:
        return 0.0
    counts = np.bincount(np.frombuffer(data, dtype=np.uint8), minlength=256)
    p = counts[counts > 0] / len(data)
    return float(-(p * np.log2(p)).sum()) + 0.0
