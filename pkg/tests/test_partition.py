from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ohhcsim.partition import (
    DistributionKind,
    DistributionSpec,
    bucket_indices,
    generate,
    read_array,
    split,
    write_array,
)

from reference import multiset


class TestGenerate:
    def test_sorted_is_nondecreasing(self):
        spec = DistributionSpec(DistributionKind.SORTED, 5, 99, (1, 100))
        arr = generate(spec)
        assert arr.size == 5
        assert all(arr[i] <= arr[i + 1] for i in range(4))

    def test_reversed_is_reverse_of_sorted_same_multiset(self):
        fwd = generate(DistributionSpec(DistributionKind.SORTED, 1000, 4))
        rev = generate(DistributionSpec(DistributionKind.REVERSED, 1000, 4))
        assert np.array_equal(rev, fwd[::-1])
        assert multiset(rev) == multiset(fwd)

    def test_deterministic(self):
        spec = DistributionSpec(DistributionKind.RANDOM, 10**6, 123)
        assert np.array_equal(generate(spec), generate(spec))

    def test_distinct_seeds_differ(self):
        a = generate(DistributionSpec(DistributionKind.RANDOM, 1000, 1))
        b = generate(DistributionSpec(DistributionKind.RANDOM, 1000, 2))
        assert not np.array_equal(a, b)

    def test_range_respected(self):
        for kind in DistributionKind:
            arr = generate(DistributionSpec(kind, 5000, 8, (-50, 50)))
            assert arr.min() >= -50 and arr.max() <= 50

    def test_local_bands_ascending(self):
        arr = generate(DistributionSpec(DistributionKind.LOCAL, 6400, 3, (0, 63999)))
        segments = np.split(arr, 64)
        for a, b in zip(segments, segments[1:]):
            assert a.max() <= b.min() + 1000  # bands cover 1/64 of the range each
        # Each segment stays inside its own narrow band.
        for s, seg in enumerate(segments):
            assert seg.min() >= s * 1000
            assert seg.max() < (s + 1) * 1000

    def test_local_fewer_elements_than_segments(self):
        arr = generate(DistributionSpec(DistributionKind.LOCAL, 5, 3))
        assert arr.size == 5

    def test_bad_spec_rejected(self):
        with pytest.raises(ValueError):
            DistributionSpec(DistributionKind.RANDOM, 0, 1)
        with pytest.raises(ValueError):
            DistributionSpec(DistributionKind.RANDOM, 5, 1, (10, 1))


class TestSplit:
    def test_hand_worked_example(self):
        bset = split(np.array([1, 5, 9, 3]), 2)
        assert bset.subdivider == Fraction(4)
        assert [b.tolist() for b in bset.buckets] == [[1, 3], [5, 9]]

    def test_single_bucket(self):
        arr = np.array([4, 2, 9])
        bset = split(arr, 1)
        assert [b.tolist() for b in bset.buckets] == [[4, 2, 9]]

    def test_degenerate_constant_array(self):
        bset = split(np.array([7, 7, 7]), 3)
        assert [b.tolist() for b in bset.buckets] == [[7, 7, 7], [], []]
        assert bset.subdivider == 0

    def test_max_value_clamped_to_last_bucket(self):
        bset = split(np.array([0, 10]), 4)
        assert bset.buckets[3].tolist() == [10]

    def test_permutation_property(self):
        rng = np.random.default_rng(17)
        arr = rng.integers(-1000, 1000, size=5000)
        bset = split(arr, 36)
        merged = np.concatenate(bset.buckets)
        assert multiset(merged) == multiset(arr)

    def test_range_ordering(self):
        rng = np.random.default_rng(18)
        arr = rng.integers(0, 10**9, size=20000)
        bset = split(arr, 144)
        previous_max = None
        for bucket in bset.buckets:
            if bucket.size == 0:
                continue
            if previous_max is not None:
                assert previous_max <= bucket.min()
            previous_max = bucket.max()

    def test_stable_and_deterministic(self):
        rng = np.random.default_rng(19)
        arr = rng.integers(0, 50, size=300)
        a = split(arr, 7)
        b = split(arr, 7)
        for ba, bb in zip(a.buckets, b.buckets):
            assert np.array_equal(ba, bb)

    def test_negative_values(self):
        bset = split(np.array([-8, -1, -5, -3]), 2)
        assert [b.tolist() for b in bset.buckets] == [[-8, -5], [-1, -3]]

    def test_empty_master_rejected(self):
        with pytest.raises(ValueError):
            split(np.array([], dtype=np.int64), 3)

    def test_extreme_value_range(self):
        # Wider than int64 intermediates allow: exercises the exact-int path.
        arr = np.array([-(2**62) - 5, 2**62 + 5, 0, 17], dtype=np.int64)
        bset = split(arr, 3)
        merged = np.concatenate(bset.buckets)
        assert multiset(merged) == multiset(arr)
        assert bset.buckets[0].tolist() == [-(2**62) - 5]
        assert set(bset.buckets[1].tolist()) == {0, 17}
        assert bset.buckets[2].tolist() == [2**62 + 5]

    @given(
        st.lists(st.integers(min_value=-(2**62), max_value=2**62), min_size=1, max_size=200),
        st.integers(min_value=1, max_value=40),
    )
    def test_properties_hold_for_any_input(self, values, n_buckets):
        arr = np.array(values, dtype=np.int64)
        bset = split(arr, n_buckets)
        assert len(bset.buckets) == n_buckets
        assert multiset(np.concatenate(bset.buckets)) == multiset(arr)
        previous_max = None
        for bucket in bset.buckets:
            if bucket.size == 0:
                continue
            if previous_max is not None:
                assert previous_max <= bucket.min()
            previous_max = bucket.max()

    def test_bucket_indices_match_rational_rule(self):
        rng = np.random.default_rng(20)
        arr = rng.integers(-500, 500, size=1000)
        mn, mx = int(arr.min()), int(arr.max())
        n = 13
        idx = bucket_indices(arr, mn, mx, n)
        width = Fraction(mx - mn, n)
        for v, i in zip(arr.tolist(), idx.tolist()):
            expected = min(int(Fraction(v - mn) / width), n - 1)
            assert i == expected


class TestArrayFiles:
    def test_text_round_trip(self, tmp_path):
        arr = np.array([5, -3, 0, 2**40], dtype=np.int64)
        path = tmp_path / "values.txt"
        write_array(path, arr)
        assert read_array(path).tolist() == arr.tolist()
        assert path.read_text().splitlines()[0] == "5"

    def test_binary_round_trip(self, tmp_path):
        arr = np.array([1, 2**62, -9], dtype=np.int64)
        path = tmp_path / "values.bin"
        write_array(path, arr)
        assert path.stat().st_size == arr.size * 8
        assert read_array(path).tolist() == arr.tolist()

    def test_i64_suffix_is_binary(self, tmp_path):
        arr = np.arange(10, dtype=np.int64)
        path = tmp_path / "values.i64"
        write_array(path, arr)
        assert path.stat().st_size == 80
        assert read_array(path).tolist() == arr.tolist()
