"""Compiled primitives: Philox known answers, inverse normal, uniform layout."""

import random
from statistics import NormalDist

import numpy as np
import pytest

from gqnm import _kernels
from gqnm.noise import RngStream

U = np.uint64

# Random123 known-answer vectors for Philox4x32-10: (counter, key, output).
PHILOX_KAT = [
    ((0, 0, 0, 0), (0, 0), (0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8)),
    (
        (0xFFFFFFFF,) * 4,
        (0xFFFFFFFF,) * 2,
        (0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD),
    ),
    (
        (0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344),
        (0xA4093822, 0x299F31D0),
        (0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1),
    ),
]


@pytest.mark.parametrize("ctr, key, expected", PHILOX_KAT)
def test_philox_known_answers(ctr, key, expected):
    out = _kernels.philox4x32(*(U(c) for c in ctr), *(U(k) for k in key))
    assert tuple(int(x) for x in out) == expected


def test_inverse_normal_matches_stdlib():
    rng = random.Random(3)
    ps = [rng.random() for _ in range(20_000)]
    ps += [1e-300, 1e-16, 2.0**-53, 0.425, 0.075, 0.5, 1 - 2.0**-53]
    nd = NormalDist()
    for p in ps:
        assert _kernels.inv_norm(p) == pytest.approx(nd.inv_cdf(p), rel=1e-15, abs=1e-15)


def test_uniforms_open_interval_and_extremes():
    assert _kernels._to_unit(U(0), U(0)) == 2.0**-53
    top = _kernels._to_unit(U(0xFFFFFFFF), U(0xFFFFFFFF))
    assert top == 1.0 - 2.0**-53
    u = RngStream(5, 9).uniforms(100_000)
    assert u.min() > 0.0 and u.max() < 1.0


@pytest.mark.parametrize("start", [0, 1, 2, 7])
def test_fill_uniforms_is_position_addressed(start):
    whole = RngStream(11, 4).uniforms(40)
    part = np.empty(15)
    _kernels.fill_uniforms(part, U(4), start, U(11), U(0))
    np.testing.assert_array_equal(part, whole[start:start + 15])


def test_sequential_reads_match_bulk_read():
    s1, s2 = RngStream(1, 2), RngStream(1, 2)
    pieces = np.concatenate([s1.uniforms(3), [s1.uniform()], s1.uniforms(6)])
    np.testing.assert_array_equal(pieces, s2.uniforms(10))
