from itertools import combinations

import numpy as np
import pytest

from srcodes import gf256
from srcodes.errors import ParameterError, ShapeError
from srcodes.mds import make_generator, mds_decode, mds_encode


def _random_buffers(rng, count, length=64):
    return [rng.integers(0, 256, length, dtype=np.uint8) for _ in range(count)]


def test_generator_2_4_all_submatrices_invertible():
    # exhaustive oracle: invert every C(4,2) column pair
    g = make_generator(2, 4)
    for cols in combinations(range(4), 2):
        gf256.mat_inv(g.entries[:, cols])  # raises if singular


def test_generator_identity_cases():
    g = make_generator(1, 1)
    assert g.entries.tolist() == [[1]]
    g = make_generator(3, 3)
    assert np.array_equal(g.entries, np.eye(3, dtype=np.uint8))


def test_generator_mds_property_small_n():
    for n in range(1, 9):
        for k in range(1, n + 1):
            g = make_generator(k, n)
            assert np.array_equal(g.entries[:, :k], np.eye(k, dtype=np.uint8))
            for cols in combinations(range(n), k):
                gf256.mat_inv(g.entries[:, cols])


def test_generator_deterministic():
    a = make_generator(5, 9)
    b = make_generator(5, 9)
    assert np.array_equal(a.entries, b.entries)
    assert a.construction_id == b.construction_id


def test_generator_parameter_errors():
    with pytest.raises(ParameterError):
        make_generator(0, 4)
    with pytest.raises(ParameterError):
        make_generator(5, 4)
    with pytest.raises(ParameterError):
        make_generator(2, 256)


def test_encode_systematic_prefix_and_zero():
    rng = np.random.default_rng(1)
    g = make_generator(2, 4)
    a, b = _random_buffers(rng, 2)
    out = mds_encode([a, b], g)
    assert len(out) == 4
    assert np.array_equal(out[0], a) and np.array_equal(out[1], b)
    zeros = [np.zeros(64, np.uint8), np.zeros(64, np.uint8)]
    assert all(not z.any() for z in mds_encode(zeros, g))


def test_encode_linearity():
    rng = np.random.default_rng(2)
    g = make_generator(3, 7)
    a = _random_buffers(rng, 3)
    b = _random_buffers(rng, 3)
    both = [x ^ y for x, y in zip(a, b)]
    enc = mds_encode(both, g)
    expect = [x ^ y for x, y in zip(mds_encode(a, g), mds_encode(b, g))]
    for got, want in zip(enc, expect):
        assert np.array_equal(got, want)


def test_encode_ragged_buffers_rejected():
    g = make_generator(2, 4)
    with pytest.raises(ShapeError):
        mds_encode([np.zeros(4, np.uint8), np.zeros(5, np.uint8)], g)


def test_decode_systematic_passthrough():
    rng = np.random.default_rng(3)
    g = make_generator(3, 6)
    data = _random_buffers(rng, 3)
    coded = mds_encode(data, g)
    back = mds_decode([(i, coded[i]) for i in range(3)], g)
    for got, want in zip(back, data):
        assert np.array_equal(got, want)


def test_decode_every_subset_4_2():
    # brute-force all 6 subsets and require identical recovery
    rng = np.random.default_rng(4)
    g = make_generator(2, 4)
    data = _random_buffers(rng, 2)
    coded = mds_encode(data, g)
    for cols in combinations(range(4), 2):
        back = mds_decode([(c, coded[c]) for c in cols], g)
        for got, want in zip(back, data):
            assert np.array_equal(got, want)


def test_round_trip_exhaustive_small_sampled_large():
    rng = np.random.default_rng(5)
    for n in range(2, 13):
        for k in (1, n // 2, n - 1):
            if k < 1:
                continue
            g = make_generator(k, n)
            data = _random_buffers(rng, k, length=16)
            coded = mds_encode(data, g)
            subsets = list(combinations(range(n), k))
            if n > 9 and len(subsets) > 30:
                idx = rng.choice(len(subsets), 30, replace=False)
                subsets = [subsets[i] for i in idx]
            for cols in subsets:
                back = mds_decode([(c, coded[c]) for c in cols], g)
                for got, want in zip(back, data):
                    assert np.array_equal(got, want)


def test_decode_parameter_errors():
    g = make_generator(2, 4)
    buf = np.zeros(8, np.uint8)
    with pytest.raises(ParameterError):
        mds_decode([(0, buf), (0, buf)], g)
    with pytest.raises(ParameterError):
        mds_decode([(0, buf)], g)
    with pytest.raises(ParameterError):
        mds_decode([(0, buf), (9, buf)], g)
