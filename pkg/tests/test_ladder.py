import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from intres.approx import euler_profile, interval_resolution
from intres.errors import InputError
from intres.ladder import (
    compress,
    compressed_multiplicity,
    example_module,
    interval_approximation_delta,
    ladder_interval,
    ladder_intervals,
    moebius_delta,
    xi,
    zigzag,
    zigzag_interval,
    zigzag_interval_module,
    zigzag_top_multiplicity,
)
from intres.module import direct_sum, interval_module, scramble
from intres.poset import make_grid
from intres.testkit import oracle_mobius, perturbed_module, plant


def test_xi_images():
    P = make_grid(4, 2)
    J = ladder_interval(P, (2, 4), (2, 3))
    assert xi(J, P).labels(P) == ("3,2", "2,2", "2,2", "2,1", "4,1")
    low = ladder_interval(P, (1, 3), None)
    assert xi(low, P).labels(P) == ("3,1", "1,1", "1,1", "1,1", "3,1")
    up = ladder_interval(P, None, (2, 4))
    assert xi(up, P).labels(P) == ("4,2", "2,2", "2,2", "2,2", "4,2")
    pt = ladder_interval(P, (3, 3), None)
    assert len(set(xi(pt, P).vertex_images)) == 1


def test_compressing_an_interval_along_itself():
    ip = ladder_intervals(4)
    V15 = zigzag_interval_module(1, 5)
    for I in ip:
        assert compress(interval_module(ip.poset, I), I).same_as(V15)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_compressed_multiplicity_detects_containment(n):
    ip = ladder_intervals(n)
    P = ip.poset
    for J in ip:
        VJ = interval_module(P, J)
        for I in ip:
            expected = 1 if I.mask & ~J.mask == 0 else 0
            assert compressed_multiplicity(VJ, I) == expected
            if expected:
                assert compress(VJ, I).same_as(compress(interval_module(P, I), I))


def test_zigzag_multiplicities():
    Z = zigzag()
    assert zigzag_top_multiplicity(zigzag_interval_module(1, 5)) == 1
    assert zigzag_top_multiplicity(zigzag_interval_module(2, 4)) == 0
    M = direct_sum([zigzag_interval_module(1, 5)] * 3 + [zigzag_interval_module(1, 2)])
    assert zigzag_top_multiplicity(scramble(M, 11)) == 3
    assert M.poset == Z
    with pytest.raises(ValueError):
        zigzag_interval(3, 2)


def test_example_module():
    M = example_module()
    P = M.poset
    I = ladder_interval(P, (2, 3), (1, 3))
    J = ladder_interval(P, (2, 4), (2, 3))
    t0 = time.perf_counter()
    assert compressed_multiplicity(M, I) == 0
    assert compressed_multiplicity(M, J) == 1
    assert time.perf_counter() - t0 < 1.0


@given(st.integers(2, 4), st.integers(0, 2**31), st.sampled_from([2, 3]))
def test_compressed_multiplicity_is_additive(n, seed, p):
    ip = ladder_intervals(n)
    A = perturbed_module(ip.poset, 2, seed=seed, p=p)
    B = plant(ip, 2, seed=seed + 1, p=p).module
    S = direct_sum([A, B])
    for I in list(ip)[seed % 5 :: 5]:
        assert compressed_multiplicity(S, I) == compressed_multiplicity(A, I) + compressed_multiplicity(B, I)


@given(st.integers(2, 4), st.integers(0, 2**31))
def test_delta_recovers_planted_multiplicities(n, seed):
    ip = ladder_intervals(n)
    pm = plant(ip, 4, seed=seed)
    prof = interval_approximation_delta(pm.module, ip)
    assert {I: d for I, d in prof.delta.items() if d} == pm.multiplicities
    assert prof.delta == oracle_mobius(prof.c, ip)


@given(st.integers(2, 4), st.integers(0, 2**31))
def test_delta_matches_euler_profile(n, seed):
    ip = ladder_intervals(n)
    M = perturbed_module(ip.poset, 2, seed=seed)
    prof = interval_approximation_delta(M, ip)
    e = euler_profile(interval_resolution(M, ip))
    assert all(prof.delta[I] == e.get(I, 0) for I in ip)
    assert prof.c == interval_approximation_delta(scramble(M, seed), ip).c


def test_moebius_inverts_upper_sums():
    ip = ladder_intervals(3)
    f = {I: (k * 7) % 5 - 2 for k, I in enumerate(ip)}
    c = {I: sum(f[J] for J in ip.supersets(I)) for I in ip}
    assert moebius_delta(c, ip) == f


def test_parallel_and_serial_agree():
    M = example_module()
    ip = ladder_intervals(4)
    assert interval_approximation_delta(M, ip, jobs=2).c == interval_approximation_delta(M, ip).c


def test_non_ladders_are_rejected():
    M = perturbed_module(make_grid(3, 3), 1, seed=0)
    with pytest.raises(InputError):
        interval_approximation_delta(M)
    with pytest.raises(InputError):
        xi(ladder_intervals(2)[0], make_grid(2, 3))
