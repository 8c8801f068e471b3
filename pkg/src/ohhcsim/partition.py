"""Input generation and value-range bucket splitting.

The split assigns each element to one of N ordered buckets by dividing the
value range into N equal steps: the step width is (max - min) / N and an
element v lands in bucket floor((v - min) / width), clamped so v == max stays
in the last bucket. Buckets therefore satisfy range ordering (every element
of bucket i is <= every element of bucket j for i < j), which is what lets
the gather concatenate payloads without any merge work. When max == min the
width degenerates to zero and everything goes to bucket 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

DEFAULT_VALUE_RANGE = (0, 2**31 - 1)

#: Segment count of the locally-clustered distribution. Fixed (rather than
#: derived from a topology) so a DistributionSpec generates the same array
#: no matter which network it is later run on.
LOCAL_SEGMENTS = 64

BINARY_SUFFIXES = {".bin", ".i64"}


class DistributionKind(enum.Enum):
    RANDOM = "random"
    SORTED = "sorted"
    REVERSED = "reversed"
    LOCAL = "local"


@dataclass(frozen=True)
class DistributionSpec:
    kind: DistributionKind
    element_count: int
    seed: int
    value_range: tuple[int, int] = DEFAULT_VALUE_RANGE

    def __post_init__(self):
        lo, hi = self.value_range
        if lo > hi:
            raise ValueError(f"empty value range [{lo}, {hi}]")
        if self.element_count <= 0:
            raise ValueError("element_count must be positive")


def generate(spec: DistributionSpec, local_segments: int = LOCAL_SEGMENTS) -> np.ndarray:
    """Deterministically generate the input array described by ``spec``."""
    lo, hi = spec.value_range
    n = spec.element_count
    rng = np.random.default_rng(spec.seed)
    if spec.kind is DistributionKind.LOCAL:
        return _generate_local(rng, n, lo, hi, local_segments)
    draw = rng.integers(lo, hi, size=n, dtype=np.int64, endpoint=True)
    if spec.kind is DistributionKind.RANDOM:
        return draw
    draw.sort()
    if spec.kind is DistributionKind.SORTED:
        return draw
    return draw[::-1].copy()


def _generate_local(rng, n: int, lo: int, hi: int, segments: int) -> np.ndarray:
    segments = max(1, min(segments, n))
    span = hi - lo + 1
    sizes = [n // segments + (1 if s < n % segments else 0) for s in range(segments)]
    parts = []
    for s, size in enumerate(sizes):
        band_lo = lo + span * s // segments
        band_hi = lo + span * (s + 1) // segments - 1
        band_hi = max(band_lo, band_hi)
        parts.append(rng.integers(band_lo, band_hi, size=size, dtype=np.int64, endpoint=True))
    return np.concatenate(parts)


@dataclass
class BucketSet:
    buckets: list[np.ndarray]
    subdivider: Fraction
    min_value: int
    max_value: int

    @property
    def bucket_count(self) -> int:
        return len(self.buckets)

    @property
    def total_elements(self) -> int:
        return int(sum(b.size for b in self.buckets))


def bucket_indices(values: np.ndarray, min_value: int, max_value: int, n_buckets: int) -> np.ndarray:
    """Bucket index of each element, clamped to [0, n_buckets - 1]."""
    if max_value == min_value:
        return np.zeros(values.size, dtype=np.int64)
    span = max_value - min_value
    if span * n_buckets < 2**63:
        idx = ((values - min_value) * n_buckets) // span
    else:
        # Wider than int64 intermediates allow; fall back to exact Python ints.
        idx = np.array(
            [(int(v) - min_value) * n_buckets // span for v in values.tolist()],
            dtype=np.int64,
        )
    return np.minimum(idx, n_buckets - 1)


def split(master, n_buckets: int) -> BucketSet:
    """Split ``master`` into ``n_buckets`` range-ordered buckets.

    Stable: elements keep their relative order inside each bucket, so the
    result is fully determined by (array, n_buckets).
    """
    arr = np.ascontiguousarray(master, dtype=np.int64)
    if arr.size == 0:
        raise ValueError("cannot split an empty array")
    if n_buckets < 1:
        raise ValueError("n_buckets must be >= 1")
    mn = int(arr.min())
    mx = int(arr.max())
    idx = bucket_indices(arr, mn, mx, n_buckets)
    order = np.argsort(idx, kind="stable")
    rearranged = arr[order]
    counts = np.bincount(idx, minlength=n_buckets)
    offsets = np.zeros(n_buckets + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    buckets = [rearranged[offsets[b] : offsets[b + 1]] for b in range(n_buckets)]
    return BucketSet(buckets, Fraction(mx - mn, n_buckets), mn, mx)


def write_array(path, values) -> None:
    """Write an int64 array; raw little-endian for .bin/.i64, else decimal text."""
    arr = np.ascontiguousarray(values, dtype=np.int64)
    path = Path(path)
    if path.suffix in BINARY_SUFFIXES:
        arr.astype("<i8").tofile(path)
    else:
        with open(path, "w") as fh:
            fh.writelines(f"{v}\n" for v in arr.tolist())


def read_array(path) -> np.ndarray:
    path = Path(path)
    if path.suffix in BINARY_SUFFIXES:
        return np.fromfile(path, dtype="<i8").astype(np.int64)
    with open(path) as fh:
        return np.array([int(line) for line in fh if line.strip()], dtype=np.int64)
