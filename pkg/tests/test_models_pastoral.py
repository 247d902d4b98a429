from __future__ import annotations

import math

import pytest

from parsim import kernel
from parsim.models import pastoral
from parsim.rng import SplitMix64


def defaults():
    return kernel.validate_params(kernel.get_model("pastoral"), {})


def bare_state(width=3, height=3, **overrides):
    params = {"width": width, "height": height, "herd_size": 0,
              "tree_count": 0}
    params.update(overrides)
    return kernel.init_simulation("pastoral", params, seed=1)


# -- water ---------------------------------------------------------------

def test_water_wet_season_no_trees():
    p = defaults()
    assert pastoral.water_update(0.5, 1, 0, p) == pytest.approx(0.56, abs=1e-15)


def test_water_clamps_at_zero():
    p = dict(defaults(), rain_rate=0.0)
    assert pastoral.water_update(0.0, 1, 0, p) == 0.0


def test_water_clamps_at_one():
    p = defaults()
    assert pastoral.water_update(1.0, 0, 0, p) <= 1.0


def test_water_dry_season_has_no_rain():
    p = defaults()
    # tick 16 is the first dry tick of the default 52-week cycle
    assert pastoral.rain_rate(16, p) == 0.0
    assert pastoral.rain_rate(15, p) == p["rain_rate"]
    assert pastoral.rain_rate(52, p) == p["rain_rate"]  # cycle restarts


def test_water_tree_uptake():
    p = defaults()
    with_trees = pastoral.water_update(0.5, 1, 2, p)
    without = pastoral.water_update(0.5, 1, 0, p)
    assert without - with_trees == pytest.approx(2 * p["tree_uptake"], abs=1e-15)


# -- grass ---------------------------------------------------------------

def test_grass_dryout_below_threshold():
    f, d = pastoral.grass_update(0.4, 0.1, 0.0, defaults())
    assert f == pytest.approx(0.32, abs=1e-15)
    assert d == pytest.approx(0.175, abs=1e-15)


def test_grass_full_capacity_no_growth():
    f, d = pastoral.grass_update(0.6, 0.4, 0.9, defaults())
    assert f <= 0.6  # growth term zero at capacity
    assert f + d <= 1.0


def test_grass_no_fresh_only_decay():
    p = defaults()
    f, d = pastoral.grass_update(0.0, 0.5, 0.0, p)
    assert f == 0.0
    assert d == pytest.approx(0.5 - p["dry_decay"] * 0.5, abs=1e-15)


def test_patch_phase_matches_per_cell_ops():
    state = kernel.init_simulation("pastoral",
                                   {"width": 6, "height": 4,
                                    "herd_size": 0, "tree_count": 5}, seed=5)
    work = state.clone()
    work.tick += 1
    pastoral._patch_phase(work)
    p = state.params
    trees = [0] * 24
    for a in state.agents:
        if a.kind == "tree":
            trees[state.cell_index(a.row, a.col)] += 1
    for i in range(24):
        h = pastoral.water_update(state.patch_attrs["humidity"][i],
                                  work.tick, trees[i], p)
        f, d = pastoral.grass_update(state.patch_attrs["fresh"][i],
                                     state.patch_attrs["dry"][i],
                                     state.patch_attrs["humidity"][i], p)
        assert work.patch_attrs["humidity"][i] == h
        assert work.patch_attrs["fresh"][i] == f
        assert work.patch_attrs["dry"][i] == d


# -- cows ----------------------------------------------------------------

def spawn_cow(state, row, col, energy=1.0):
    cow = kernel.spawn_agent(state, "cow", row, col, {"energy": energy})
    return state, cow


def test_cow_moves_to_unique_fresh_maximum():
    state = bare_state()
    state.patch_attrs["fresh"] = [0.0] * 9
    state.patch_attrs["fresh"][state.cell_index(0, 1)] = 1.0
    state, cow = spawn_cow(state, 1, 1)
    pastoral._cow_step(state, cow, SplitMix64(0))
    assert (cow.row, cow.col) == (0, 1)
    p = state.params
    assert state.patch_attrs["fresh"][state.cell_index(0, 1)] == \
        pytest.approx(1.0 - p["cow_bite"], abs=1e-15)
    expected = 1.0 + p["energy_yield"] * p["cow_bite"] - 0.05 - p["move_cost"]
    assert cow.attrs["energy"] == pytest.approx(expected, abs=1e-15)


def test_cow_barren_ties_break_to_lowest_row_major_index():
    state = bare_state()
    state.patch_attrs["fresh"] = [0.0] * 9
    state.patch_attrs["dry"] = [0.0] * 9
    # from the center, (0,0) is the lowest-index candidate: cow moves there
    state, cow = spawn_cow(state, 1, 1)
    pastoral._cow_step(state, cow, SplitMix64(0))
    assert (cow.row, cow.col) == (0, 0)
    assert cow.attrs["energy"] == \
        pytest.approx(1.0 - 0.05 - state.params["move_cost"], abs=1e-15)
    # from the corner, the current cell is the lowest index: no move cost
    state2 = bare_state()
    state2.patch_attrs["fresh"] = [0.0] * 9
    state2.patch_attrs["dry"] = [0.0] * 9
    state2, cow2 = spawn_cow(state2, 0, 0)
    pastoral._cow_step(state2, cow2, SplitMix64(0))
    assert (cow2.row, cow2.col) == (0, 0)
    assert cow2.attrs["energy"] == pytest.approx(1.0 - 0.05, abs=1e-15)


def test_cow_tops_up_from_dry_grass():
    state = bare_state()
    state.patch_attrs["fresh"] = [0.0] * 9
    state.patch_attrs["dry"] = [0.0] * 9
    i = state.cell_index(0, 0)
    state.patch_attrs["fresh"][i] = 0.1
    state.patch_attrs["dry"][i] = 0.5
    state, cow = spawn_cow(state, 0, 0)
    pastoral._cow_step(state, cow, SplitMix64(0))
    p = state.params
    assert state.patch_attrs["fresh"][i] == 0.0
    assert state.patch_attrs["dry"][i] == pytest.approx(0.5 - (p["cow_bite"] - 0.1),
                                                        abs=1e-15)
    expected = 1.0 + p["energy_yield"] * p["cow_bite"] - 0.05
    assert cow.attrs["energy"] == pytest.approx(expected, abs=1e-15)


def test_cow_starves_and_is_removed_this_tick():
    state = bare_state()
    state.patch_attrs["fresh"] = [0.0] * 9
    state.patch_attrs["dry"] = [0.0] * 9
    state.patch_attrs["humidity"] = [0.0] * 9
    state, cow = spawn_cow(state, 0, 0, energy=0.01)
    after = kernel.step(state)
    assert after.agents == []


# -- trees ---------------------------------------------------------------

def test_tree_biomass_follows_humidity():
    state = bare_state()
    tree = kernel.spawn_agent(state, "tree", 1, 1, {"biomass": 0.0})
    state.patch_attrs["humidity"] = [0.0] * 9
    pastoral._tree_step(state, tree, SplitMix64(0))
    assert tree.attrs["biomass"] == 0.0
    state.patch_attrs["humidity"] = [1.0] * 9
    pastoral._tree_step(state, tree, SplitMix64(0))
    assert tree.attrs["biomass"] == pytest.approx(0.1, abs=1e-15)


def test_tree_linear_accumulation():
    state = bare_state()
    tree = kernel.spawn_agent(state, "tree", 0, 0, {"biomass": 0.0})
    state.patch_attrs["humidity"] = [0.25] * 9
    for _ in range(10):
        pastoral._tree_step(state, tree, SplitMix64(0))
    assert tree.attrs["biomass"] == pytest.approx(10 * 0.1 * 0.25, abs=1e-12)


def test_trees_never_move_or_die():
    state = kernel.init_simulation("pastoral",
                                   {"width": 5, "height": 5, "herd_size": 0,
                                    "tree_count": 4}, seed=9)
    positions = {a.index: (a.row, a.col) for a in state.agents}
    after = kernel.run(state, 30)
    assert {a.index: (a.row, a.col) for a in after.agents} == positions
    assert all(a.alive for a in after.agents)


# -- invariants ----------------------------------------------------------

@pytest.mark.parametrize("seed", [0, 1, 2])
def test_bounds_hold_over_time(seed):
    state = kernel.init_simulation("pastoral", {"width": 8, "height": 8,
                                                "herd_size": 6,
                                                "tree_count": 4}, seed)
    for _ in range(150):
        state = kernel.step(state)
        h = state.patch_attrs["humidity"]
        f = state.patch_attrs["fresh"]
        d = state.patch_attrs["dry"]
        for i in range(64):
            assert 0.0 <= h[i] <= 1.0
            assert 0.0 <= f[i] <= 1.0
            assert 0.0 <= d[i] <= 1.0
            assert f[i] + d[i] <= 1.0
        for a in state.agents:
            if a.kind == "cow":
                assert a.attrs["energy"] > 0.0


def test_no_rain_starvation():
    p = defaults()
    state = kernel.init_simulation("pastoral",
                                   {"width": 6, "height": 6, "rain_rate": 0.0,
                                    "herd_size": 0, "tree_count": 0}, seed=3)
    drained = kernel.run(state, math.ceil(1 / p["evaporation"]))
    assert all(h == 0.0 for h in drained.patch_attrs["humidity"])
    fresh = drained.patch_attrs["fresh"]
    for _ in range(20):
        drained = kernel.step(drained)
        nxt = drained.patch_attrs["fresh"]
        assert all(nxt[i] <= fresh[i] for i in range(36))
        fresh = nxt
