import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from intres import io
from intres.approx import (
    check_step,
    euler_profile,
    interval_codimension,
    interval_dimension,
    interval_resolution,
    minimal_right_interval_approximation,
)
from intres.errors import DepthExceeded
from intres.module import interval_module, projective_at, scramble, zero_module
from intres.testkit import oracle_top, oracle_submodule, plant, planted_module
from strategies import grid_intervals, grid_modules

FIXTURES = Path(__file__).parent / "fixtures"

# intgldim of small grids, used as an upper bound on every sampled module
INTGLDIM = {(1, 1): 0, (1, 3): 0, (2, 2): 0, (2, 3): 1, (3, 2): 1, (3, 3): 2, (2, 4): 2}


def test_interval_module_is_its_own_approximation():
    ip = grid_intervals((2, 3))
    for iv in ip:
        V = interval_module(ip.poset, iv)
        step = minimal_right_interval_approximation(V, ip)
        assert step.multiplicities == {iv: 1}
        assert step.kernel.is_zero()
        assert all((c == [[1]]).all() for c in step.cover.comps if c.size)


def test_projective_single_summand():
    ip = grid_intervals((3, 3))
    P = ip.poset
    for x in range(P.n):
        step = minimal_right_interval_approximation(projective_at(P, x), ip)
        assert list(step.multiplicities) == [ip.find(P.up_mask[x])]


def test_zero_module_has_empty_step_and_length_zero():
    ip = grid_intervals((2, 2))
    Z = zero_module(ip.poset)
    step = minimal_right_interval_approximation(Z, ip)
    assert step.multiplicities == {} and step.source.is_zero()
    R = interval_resolution(Z, ip)
    assert R.length == 0 and len(R.steps) == 1
    assert interval_dimension(Z, ip) == 0
    assert euler_profile(R) == {}


@given(st.sampled_from([(2, 2), (2, 3), (3, 3), (2, 4)]), st.integers(0, 2**31), st.sampled_from([2, 3]))
def test_planted_multiplicities_are_recovered(shape, seed, p):
    ip = grid_intervals(shape)
    pm = plant(ip, 4, seed=seed, p=p)
    R = interval_resolution(pm.module, ip)
    assert R.length == 0
    assert R.steps[0].multiplicities == pm.multiplicities
    assert euler_profile(R) == pm.multiplicities


@given(grid_modules(shapes=st.sampled_from([(2, 2), (2, 3), (3, 2)])))
def test_tops_match_brute_force_oracle(a):
    M, ip = a
    step = minimal_right_interval_approximation(M, ip)
    assert step.multiplicities == oracle_top(M, ip)
    if not step.kernel.is_zero():
        K = step.kernel
        assert minimal_right_interval_approximation(K, ip).multiplicities == oracle_top(K, ip)


@given(grid_modules(max_dim=3))
def test_resolution_invariants(a):
    M, ip = a
    R = interval_resolution(M, ip, verify=True)
    assert all(R.checks.values())
    for step in R.steps:
        assert check_step(step, ip) == {"surjective": True, "approximation": True, "exact": True}
    assert R.steps[-1].kernel.is_zero()
    assert all(not s.kernel.is_zero() for s in R.steps[:-1])
    # alternating dimension count of an exact sequence
    assert sum(d * len(iv) for iv, d in euler_profile(R).items()) == M.total_dim()
    shape = ip.poset.shape
    assert R.length <= INTGLDIM[shape]
    assert set(R.table) == {iv for s in R.steps for iv in s.multiplicities}
    assert all(len(v) == R.length + 1 for v in R.table.values())


@given(grid_modules(max_dim=3), st.integers(0, 2**31))
def test_multiplicities_stable_under_scramble(a, seed):
    M, ip = a
    R1 = interval_resolution(M, ip)
    R2 = interval_resolution(scramble(M, seed), ip)
    assert R1.table == R2.table


def test_archived_length_one_module_over_2x3():
    obj = json.loads((FIXTURES / "grid23_length1.json").read_text())
    M = io.module_from_json(obj)
    ip = grid_intervals((2, 3))
    R = interval_resolution(M, ip, verify=True)
    assert R.length == 1
    assert all(R.checks.values())


def test_every_module_over_2x2_has_length_zero():
    ip = grid_intervals((2, 2))
    from intres.testkit import random_module

    for seed in range(40):
        dims = [1 + (seed >> k) % 3 for k in range(4)]
        assert interval_dimension(random_module(ip.poset, dims, seed=seed), ip) == 0


def test_depth_budget_is_enforced():
    obj = json.loads((FIXTURES / "grid23_length1.json").read_text())
    M = io.module_from_json(obj)
    ip = grid_intervals((2, 3))
    with pytest.raises(DepthExceeded):
        interval_resolution(M, ip, max_depth=0)
    assert interval_resolution(M, ip, max_depth=1).length == 1
    with pytest.raises(ValueError):
        interval_resolution(M, ip, max_depth=-1)


def test_coresolution_dimension_of_interval_modules_is_zero():
    ip = grid_intervals((3, 3))
    for iv in list(ip)[::7]:
        assert interval_codimension(interval_module(ip.poset, iv), ip) == 0


@given(st.sampled_from([(2, 2), (2, 3), (3, 3), (4, 2)]), st.integers(0, 2**31))
def test_submodules_of_interval_modules_are_interval_decomposable(shape, seed):
    ip = grid_intervals(shape)
    iv = ip[seed % len(ip)]
    S = oracle_submodule(ip.poset, iv, seed=seed)
    assert interval_dimension(S, ip) == 0


def test_planted_module_without_scramble_matches():
    ip = grid_intervals((2, 3))
    mults = {ip[3]: 2, ip[10]: 1}
    M = planted_module(ip.poset, mults, shuffle=False)
    assert minimal_right_interval_approximation(M, ip).multiplicities == dict(sorted(mults.items(), key=lambda kv: kv[0].members))
