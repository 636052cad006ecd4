import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from intres import fflinalg as ff
from intres.approx import interval_hom_components
from intres.artrans import dual
from intres.module import (
    CommutativityError,
    PersistenceModule,
    cokernel,
    direct_sum,
    hom_basis,
    hom_dim,
    identity_morphism,
    injective_at,
    interval_module,
    kernel,
    projective_at,
    scramble,
    submodule_generated,
    zero_module,
)
from intres.poset import bits, make_chain, make_grid, make_interval
from strategies import grid_intervals, grid_modules


def test_interval_module_is_thin_with_identities():
    P = make_grid(2, 2)
    iv = make_interval(P, [0, 1, 2])
    V = interval_module(P, iv)
    assert V.dims == (1, 1, 1, 0)
    assert V.maps[(0, 1)].tolist() == [[1]]
    assert V.maps[(0, 2)].tolist() == [[1]]
    assert V.maps[(1, 3)].shape == (0, 1)
    with pytest.raises(ValueError):
        interval_module(P, [1, 2])


def test_commutativity_is_enforced():
    P = make_grid(2, 2)
    ones = np.ones((1, 1), dtype=np.int64)
    maps = {(0, 1): ones, (0, 2): ones, (1, 3): ones, (2, 3): 0 * ones}
    with pytest.raises(CommutativityError):
        PersistenceModule(P, [1, 1, 1, 1], maps)


def test_map_shapes_are_checked():
    P = make_chain(2)
    with pytest.raises(ValueError):
        PersistenceModule(P, [1, 2], {(0, 1): np.ones((1, 1))})
    with pytest.raises(ValueError):
        PersistenceModule(P, [1, 1], {(1, 0): np.ones((1, 1))})


def test_projectives_and_injectives():
    P = make_grid(2, 3)
    for x in range(P.n):
        assert projective_at(P, x).support == P.up_mask[x]
        assert injective_at(P, x).support == P.down_mask[x]
        # Hom(P_x, M) = M(x)
        M = interval_module(P, bits(P.up_mask[0]))
        assert hom_dim(projective_at(P, x), M) == M.dims[x]


@pytest.mark.parametrize("shape", [(2, 2), (2, 3), (3, 3)])
def test_hom_between_intervals_follows_component_rule(shape):
    ip = grid_intervals(shape)
    P = ip.poset
    Vs = [interval_module(P, iv) for iv in ip]
    for k in range(len(ip)):
        for j in range(len(ip)):
            assert hom_dim(Vs[k], Vs[j]) == len(interval_hom_components(ip, k, j))


@given(grid_modules(), grid_modules())
def test_hom_basis_is_natural_and_independent(a, b):
    (M, _), (N, _) = a, b
    if M.poset != N.poset or M.p != N.p:
        return
    H = hom_basis(M, N)
    for f in H.basis:
        assert f.is_natural()
    if H.basis:
        vecs = np.array([f.vector() for f in H.basis]).T
        assert ff.rank(vecs, M.p) == len(H)


@given(grid_modules(max_dim=2), st.integers(0, 2**31))
def test_scramble_preserves_hom_dimensions(a, seed):
    M, ip = a
    S = scramble(M, seed)
    assert S.check_commutativity()
    for iv in list(ip)[:: max(1, len(ip) // 6)]:
        V = interval_module(M.poset, iv, M.p)
        assert hom_dim(V, M) == hom_dim(V, S)
        assert hom_dim(M, V) == hom_dim(S, V)


@given(grid_modules(max_dim=2))
def test_kernel_and_cokernel_of_endomorphisms(a):
    M, _ = a
    H = hom_basis(M, M)
    f = identity_morphism(M)
    for g in H.basis[:3]:
        f = f + g
    K, inc = kernel(f)
    C, proj = cokernel(f)
    assert inc.is_natural() and inc.is_mono()
    assert proj.is_natural() and proj.is_epi()
    assert (f @ inc).is_zero()
    assert (proj @ f).is_zero()
    for x in range(M.n):
        r = ff.rank(f.comps[x], M.p)
        assert K.dims[x] == M.dims[x] - r
        assert C.dims[x] == M.dims[x] - r


@given(grid_modules(max_dim=2), grid_modules(max_dim=2))
def test_duality_reverses_hom(a, b):
    (M, _), (N, _) = a, b
    if M.poset != N.poset or M.p != N.p:
        return
    assert hom_dim(M, N) == hom_dim(dual(N), dual(M))
    DD = dual(dual(M))
    assert DD.poset == M.poset and DD.same_as(M)


def test_direct_sum_and_zero():
    P = make_chain(3)
    Z = direct_sum([], P)
    assert Z.is_zero() and Z.same_as(zero_module(P))
    V = interval_module(P, [0, 1])
    W = interval_module(P, [1, 2])
    S = direct_sum([V, W])
    assert S.dims == (1, 2, 1)
    assert hom_dim(S, S) == hom_dim(V, V) + hom_dim(V, W) + hom_dim(W, V) + hom_dim(W, W)
    with pytest.raises(ValueError):
        direct_sum([V, interval_module(make_chain(2), [0])])


def test_submodule_generated_by_vertex():
    P = make_grid(2, 2)
    V = interval_module(P, [0, 1, 2, 3])
    S, inc = submodule_generated(V, [(1, np.array([1]))])
    assert S.dims == (0, 1, 0, 1)
    assert inc.is_natural() and inc.is_mono()


def test_path_maps_compose():
    P = make_chain(3)
    a = np.array([[1, 1]])
    b = np.array([[2]])
    M = PersistenceModule(P, [2, 1, 1], {(0, 1): a, (1, 2): b}, p=3)
    assert M.path_map(0, 2).tolist() == [[2, 2]]
    with pytest.raises(ValueError):
        M.path_map(2, 0)
