import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tilepack.generators import diagonal_coverage, gen_diagonal, gen_random
from tilepack.geometry import GeneralPositionError, Instance, Point, Tile, lower_staircase_points
from tilepack.packing import (
    TilePacking,
    coverage,
    load_packing,
    pack,
    pack_bruteforce,
    save_packing,
    verify_exclusive_areas,
    verify_lower_staircase,
    verify_partition,
)

from conftest import owner_oracle

O = Point(0.0, 0.0)


def test_single_point_is_whole_square():
    pk = pack(Instance((O,)))
    assert len(pk) == 1
    assert pk.tiles[0].gamma == ((1.0, 1.0),)
    assert coverage(pk) == 1.0
    assert verify_partition(pk, samples=1000).passed
    assert verify_exclusive_areas(None, pk).passed


def test_diagonal_two():
    inst = Instance((O, Point(0.5, 0.5)))
    pk = pack(inst)
    assert coverage(pk) == 0.75
    origin_tile = pk.tiles[1]
    assert origin_tile.gamma == ((0.5, 1.0), (1.0, 0.5))
    assert lower_staircase_points(origin_tile) == [(0.5, 0.5)]


@pytest.mark.parametrize("n", range(2, 65))
def test_diagonal_closed_form(n):
    pk = pack(gen_diagonal(n))
    assert abs(coverage(pk) - ((n - 1) * (n + 2) / (2 * n * n) + 1 / n**2)) <= 1e-12


def test_diagonal_large():
    assert coverage(pack(gen_diagonal(1000))) == pytest.approx(diagonal_coverage(1000), abs=1e-12)
    assert diagonal_coverage(1000) == pytest.approx(0.5005, abs=1e-6)


def test_processing_order_descends():
    pk = pack(gen_random(50, seed=3))
    sums = [p.x + p.y for p in pk.points]
    assert all(a > b for a, b in zip(sums, sums[1:]))


def test_rejects_non_general_position():
    with pytest.raises(GeneralPositionError, match="perturb"):
        pack(Instance((O, Point(0.5, 0.2), Point(0.5, 0.7))))
    with pytest.raises(ValueError):
        pack(Instance((O, Point(0.5, 1.0))))


@pytest.mark.parametrize("seed", range(20))
def test_matches_bruteforce(seed):
    inst = gen_random(int(np.random.default_rng(seed).integers(1, 60)), seed)
    fast, slow = pack(inst), pack_bruteforce(inst)
    assert fast.points == slow.points
    assert [t.gamma for t in fast.tiles] == [t.gamma for t in slow.tiles]


def test_partition_against_owner_oracle():
    inst = gen_random(40, seed=7)
    pk = pack(inst)
    rng = np.random.default_rng(1)
    samples = rng.random((20_000, 2))
    owner = owner_oracle(pk.points, samples)
    for i, t in enumerate(pk.tiles):
        inside = t.contains_many(samples)
        # boundary samples have probability zero, so membership must agree exactly
        assert np.array_equal(inside, owner == i)


def test_partition_random():
    pk = pack(gen_random(50, seed=11))
    rep = verify_partition(pk, samples=100_000, seed=2)
    assert rep.passed, rep.witnesses
    assert rep.details["area_sum"] == pytest.approx(1.0, abs=1e-9)


def test_partition_negative_control():
    a = Tile(O, (Point(0.6, 1.0), Point(1.0, 0.6)))
    b = Tile(Point(0.5, 0.5), (Point(1.0, 1.0),))
    rep = verify_partition(TilePacking((a, b), (O, Point(0.5, 0.5))), samples=10_000)
    assert not rep.passed
    w = [x for x in rep.witnesses if x["kind"] == "membership"]
    assert w and len(w[0]["tiles"]) == 2
    px, py = w[0]["point"]
    assert px >= 0.5 and py >= 0.5


def test_exclusive_areas_and_lower_staircase():
    inst = gen_random(100, seed=5)
    pk = pack(inst)
    assert verify_exclusive_areas(inst, pk).passed
    assert verify_lower_staircase(gen_random(20, seed=6), pack(gen_random(20, seed=6))).passed
    assert verify_lower_staircase(inst, pk).passed


def test_exclusive_area_negative_control():
    inst = Instance((O, Point(0.5, 0.5)))
    pk = pack(inst)
    # (0.3, 0.9) sits above the origin's diagonal and under its staircase
    injected = Instance(inst.points + (Point(0.3, 0.9),))
    rep = verify_exclusive_areas(injected, pk)
    assert not rep.passed
    assert rep.witnesses[0]["point"] == [0.3, 0.9]


def test_json_roundtrip(tmp_path):
    pk = pack(gen_random(30, seed=9))
    save_packing(pk, tmp_path / "p.json")
    back = load_packing(tmp_path / "p.json")
    assert back == pk


def test_deterministic():
    inst = gen_random(80, seed=4)
    assert pack(inst) == pack(inst)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 120), st.integers(0, 10**6))
def test_property_random_instances(n, seed):
    inst = gen_random(n, seed)
    pk = pack(inst)
    cov = coverage(pk)
    assert 0.3901 <= cov <= 1.0
    assert sum(t.area for t in pk.tiles) == pytest.approx(1.0, abs=1e-9)
    assert verify_exclusive_areas(inst, pk).passed
    assert verify_lower_staircase(inst, pk).passed
