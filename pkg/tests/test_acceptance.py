"""Acceptance criteria, each at its stated tolerance.

Every test appends one ``PASS``/``FAIL`` line to ``REPORT``; the lines are
printed at the end of the run and immediately with ``pytest -s``.
"""

import time

import numpy as np
import pytest

from intres._accel import backend
from intres.fflinalg import rank

from intres.approx import euler_profile, interval_dimension, interval_resolution
from intres.artrans import intgldim_detail
from intres.ladder import (
    compressed_multiplicity,
    example_module,
    interval_approximation_delta,
    ladder_interval,
    ladder_intervals,
)
from intres.poset import enumerate_intervals, make_chain, make_grid, subset_scan_intervals
from intres.testkit import oracle_submodule, perturbed_module, plant, random_interval

REPORT: list[str] = []

pytestmark = pytest.mark.slow

GRIDS = {
    (2, 2): 0, (2, 3): 1, (2, 4): 2, (2, 5): 2, (2, 6): 2,
    (3, 3): 2, (3, 4): 3, (3, 5): 4,
    (4, 4): 4,
}

# resolution soundness flags, filled in by criteria 1 to 4
SOUNDNESS: dict[str, bool] = {}


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    REPORT.append(line)
    print(line)
    return ok


def all_checks(R):
    return all(R.checks.values())


@pytest.fixture(scope="session")
def grid_results():
    out = {}
    for shape in GRIDS:
        t0 = time.perf_counter()
        try:
            res = intgldim_detail(make_grid(*shape), verify=True)
            SOUNDNESS[f"grid {shape}"] = True
        except Exception as exc:  # a failed verification is reported, not hidden
            res = exc
            SOUNDNESS[f"grid {shape}"] = False
        out[shape] = (res, time.perf_counter() - t0)
    return out


def test_criterion_1_intgldim_values(grid_results):
    bad = []
    parts = []
    for shape, want in GRIDS.items():
        res, dt = grid_results[shape]
        got = res.value if not isinstance(res, Exception) else repr(res)
        parts.append(f"{shape}={got} ({dt:.0f}s)")
        if got != want:
            bad.append(shape)
    assert record(1, not bad, " ".join(parts)), f"wrong intgldim on {bad}"


def test_criterion_2_example_module():
    M = example_module()
    P = M.poset
    I = ladder_interval(P, (2, 3), (1, 3))
    J = ladder_interval(P, (2, 4), (2, 3))
    # the first jitted call loads the numba runtime once per process; that
    # start-up cost is measured separately and not charged to the computation
    t0 = time.perf_counter()
    rank(np.eye(2, dtype=np.int64), 2)
    warmup = time.perf_counter() - t0
    t0 = time.perf_counter()
    cI, cJ = compressed_multiplicity(M, I), compressed_multiplicity(M, J)
    dt = time.perf_counter() - t0
    ok = cI == 0 and cJ == 1 and dt < 1.0
    assert record(2, ok, f"c(I)={cI} c(J)={cJ} in {dt:.3f}s (backend {backend()} start-up {warmup:.2f}s)")


def ladder_samples(count, ns, planted_only=False):
    for k in range(count):
        n = ns[k % len(ns)]
        ip = ladder_intervals(n)
        if planted_only or k % 2 == 0:
            pm = plant(ip, 1 + k % 5, seed=1000 + k, p=2 if k % 3 else 3)
            yield n, ip, pm.module, pm.multiplicities
        else:
            yield n, ip, perturbed_module(ip.poset, 1 + k % 3, seed=1000 + k, p=2 if k % 3 else 3), None


def test_criterion_3_compressed_multiplicity_is_upper_euler_sum():
    bad, sound, count = 0, True, 0
    for n, ip, M, _ in ladder_samples(210, [2, 3, 4, 5]):
        R = interval_resolution(M, ip, verify=True)
        sound &= all_checks(R)
        e = euler_profile(R)
        c = interval_approximation_delta(M, ip).c
        if any(c[I] != sum(e.get(J, 0) for J in ip.supersets(I)) for I in ip):
            bad += 1
        count += 1
    SOUNDNESS["criterion 3 samples"] = sound
    assert record(3, bad == 0, f"{count} modules, n in 2..5, {bad} mismatches")


def test_criterion_4_delta_recovers_planted():
    bad_planted, bad_euler, sound, planted, perturbed = 0, 0, True, 0, 0
    samples = list(ladder_samples(210, [2, 3, 4, 5, 6], planted_only=True))
    samples += [
        (n, ip, perturbed_module(ip.poset, 1 + k % 3, seed=5000 + k, p=2 if k % 3 else 3), None)
        for k, n in enumerate([2, 3, 4, 5, 6] * 12)
        for ip in [ladder_intervals(n)]
    ]
    for n, ip, M, mults in samples:
        R = interval_resolution(M, ip, verify=True)
        sound &= all_checks(R)
        e = euler_profile(R)
        d = interval_approximation_delta(M, ip).delta
        if mults is not None:
            planted += 1
            bad_planted += any(d[I] != mults.get(I, 0) for I in ip)
        else:
            perturbed += 1
        bad_euler += any(d[I] != e.get(I, 0) for I in ip)
    SOUNDNESS["criterion 4 samples"] = sound
    ok = bad_planted == 0 and bad_euler == 0
    detail = (
        f"{planted} planted and {perturbed} perturbed modules, n in 2..6, "
        f"{bad_planted} planted and {bad_euler} euler mismatches"
    )
    assert record(4, ok, detail)


def test_criterion_5_tau_inverse_maximum(grid_results):
    lit, co = [], []
    for shape in GRIDS:
        res, _ = grid_results[shape]
        if isinstance(res, Exception):
            lit.append(f"{shape}:error")
            continue
        lit.append(f"{shape}:{res.tau_max}/{res.tau_inverse_max}")
        co.append(res.tau_max == res.tau_inverse_comax)
    ok = all(
        not isinstance(grid_results[s][0], Exception) and grid_results[s][0].tau_inverse_agrees for s in GRIDS
    )
    REPORT.append(
        "criterion 5 (supplement): tau max equals the tau inverse coresolution max on "
        f"{sum(co)}/{len(GRIDS)} grids"
    )
    assert record(5, ok, "tau max/tau inverse resolution max " + " ".join(lit))


def test_criterion_6_resolution_soundness(grid_results):
    # depends on criteria 1 to 4 having run in this session
    failing = [k for k, v in SOUNDNESS.items() if not v]
    ok = not failing and "criterion 3 samples" in SOUNDNESS and "criterion 4 samples" in SOUNDNESS
    assert record(6, ok, f"{len(SOUNDNESS)} groups verified, failing: {failing or 'none'}")


def test_criterion_7_submodules_of_interval_modules():
    shapes = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (3, 4), (4, 4)]
    bad = 0
    for k in range(500):
        shape = shapes[k % len(shapes)]
        ip = enumerate_intervals(make_grid(*shape)) if shape not in _IPS else _IPS[shape]
        _IPS[shape] = ip
        I = random_interval(ip, seed=k)
        S = oracle_submodule(ip.poset, I, seed=k, p=2 if k % 2 else 3)
        if interval_dimension(S, ip, verify=True) != 0:
            bad += 1
    assert record(7, bad == 0, f"500 submodules over grids up to (4,4), {bad} with nonzero intdim")


_IPS: dict = {}


def test_criterion_8_staircase_enumeration():
    bad = []
    for m in range(1, 13):
        for n in range(1, 13 // m + 1):
            if m * n > 12:
                continue
            P = make_grid(m, n)
            if {iv.mask for iv in enumerate_intervals(P)} != subset_scan_intervals(P):
                bad.append((m, n))
    c22 = len(enumerate_intervals(make_grid(2, 2)))
    chains = all(len(enumerate_intervals(make_chain(n))) == n * (n + 1) // 2 for n in range(1, 13))
    ok = not bad and c22 == 11 and chains
    assert record(8, ok, f"grids with m*n<=12 mismatching: {bad or 'none'}, (2,2) count {c22}, chain counts ok={chains}")
