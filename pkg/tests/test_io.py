import json

import pytest
from hypothesis import given

from intres import io
from intres.approx import interval_resolution
from intres.errors import InputError
from intres.ladder import example_module
from intres.poset import make_chain, make_grid
from strategies import grid_intervals, grid_modules


@given(grid_modules())
def test_module_roundtrip(a):
    M, _ = a
    text = io.dumps(io.module_to_json(M))
    N = io.module_from_json(json.loads(text))
    assert N.poset == M.poset and N.p == M.p and N.same_as(M)


def test_poset_roundtrips():
    for P in (make_grid(3, 2), make_chain(4)):
        assert io.poset_from_json(io.poset_to_json(P)) == P
    Q = make_grid(2, 2).opposite
    R = io.poset_from_json(io.poset_to_json(Q))
    assert R.labels == Q.labels and set(R.edges) == set(Q.edges)


def test_interval_roundtrip():
    ip = grid_intervals((3, 3))
    for iv in ip:
        obj = json.loads(io.dumps(io.interval_to_json(ip.poset, iv)))
        assert io.interval_from_json(ip.poset, obj) == iv


def test_resolution_json_shape():
    M = example_module()
    R = interval_resolution(M, grid_intervals((4, 2)), verify=True)
    obj = io.resolution_to_json(R)
    assert obj["length"] == R.length
    assert all(obj["checks"].values())


@pytest.mark.parametrize(
    "obj",
    [
        {"poset": {"kind": "grid", "m": 0, "n": 2}, "dims": {}},
        {"poset": {"kind": "grid", "m": 2, "n": 2}, "dims": {"9,9": 1}},
        {"poset": {"kind": "grid", "m": 2, "n": 2}, "dims": {"1,1": 1, "2,2": 1}, "maps": {"1,1->2,2": [[1]]}},
        {"poset": {"kind": "blob"}, "dims": {}},
        {"dims": {}},
    ],
)
def test_malformed_modules_are_input_errors(obj):
    with pytest.raises(InputError):
        io.module_from_json(obj)


def test_non_commutative_module_rejected():
    obj = {
        "poset": {"kind": "grid", "m": 2, "n": 2},
        "dims": {"1,1": 1, "2,1": 1, "1,2": 1, "2,2": 1},
        "maps": {"1,1->2,1": [[1]], "2,1->2,2": [[1]], "1,1->1,2": [[1]], "1,2->2,2": [[0]]},
    }
    with pytest.raises(ValueError):
        io.module_from_json(obj)


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        io.load_json(str(tmp_path / "nope.json"))
