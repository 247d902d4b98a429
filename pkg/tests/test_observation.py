from __future__ import annotations

import math

import pytest

from conftest import make_life, set_cells, BLINKER_V
from parsim import kernel
from parsim.errors import ExportError
from parsim.observation import (
    ProbeDef,
    ProbeSeries,
    VisualAttrs,
    export_csv,
    parse_csv,
    render_pov,
    sample_probes,
)
from parsim.state import EntityId


@pytest.fixture
def blinker():
    return set_cells(make_life(), BLINKER_V)


def test_alive_count_on_blinker(blinker):
    model = kernel.get_model("game-of-life")
    assert sample_probes(blinker, model.probes)["alive"] == 3.0


def test_dead_plus_alive_partition():
    model = kernel.get_model("game-of-life")
    state = kernel.init_simulation("game-of-life",
                                   {"width": 7, "height": 4}, seed=5)
    values = sample_probes(state, model.probes)
    assert values["dead"] + values["alive"] == 28.0


def test_probe_failure_yields_nan_not_crash(blinker):
    def broken(state):
        raise RuntimeError("boom")
    values = sample_probes(blinker, [ProbeDef("ok", lambda s: 1.0),
                                     ProbeDef("bad", broken)])
    assert values["ok"] == 1.0
    assert math.isnan(values["bad"])


def test_probes_consume_no_rng(blinker):
    model = kernel.get_model("game-of-life")
    before = blinker.rng
    sample_probes(blinker, model.probes)
    assert blinker.rng == before


def test_pastoral_total_fresh_matches_dump():
    state = kernel.init_simulation("pastoral", {}, seed=7)
    dumped = state.to_dict()
    independent = sum(dumped["patches"]["fresh"])
    assert state.probe_values["fresh_total"] == pytest.approx(independent, abs=0)


# -- CSV export ----------------------------------------------------------

def test_export_csv_format():
    series = [ProbeSeries("alive", [(0, 3.0), (1, 3.0)])]
    assert export_csv(series) == "tick,alive\n0,3\n1,3\n"


def test_export_csv_empty_list_is_error():
    with pytest.raises(ExportError):
        export_csv([])


def test_export_csv_ragged_is_error():
    with pytest.raises(ExportError):
        export_csv([ProbeSeries("a", [(0, 1.0)]),
                    ProbeSeries("b", [(0, 1.0), (1, 2.0)])])


def test_csv_round_trip_exact():
    series = [
        ProbeSeries("x", [(0, 0.1), (1, 1 / 3), (2, 3.0)]),
        ProbeSeries("y", [(0, -2.5e-17), (1, 7.0), (2, 0.30000000000000004)]),
    ]
    again = parse_csv(export_csv(series))
    assert [(s.name, s.samples) for s in again] == \
        [(s.name, s.samples) for s in series]


# -- points of view ------------------------------------------------------

def test_life_pov_colors(blinker):
    pov = kernel.get_model("game-of-life").povs["state"]
    frame = render_pov(blinker, pov)
    assert frame.cells[blinker.cell_index(2, 2)].color == (0, 255, 0)
    assert frame.cells[blinker.cell_index(0, 0)].color == (0, 0, 0)
    assert frame.width == frame.height == 5
    assert frame.agents == []


def test_humidity_ramp_endpoints():
    state = kernel.init_simulation("pastoral", {"width": 2, "height": 1,
                                                "herd_size": 0,
                                                "tree_count": 0}, seed=1)
    state.patch_attrs["humidity"] = [0.0, 1.0]
    frame = render_pov(state, kernel.get_model("pastoral").povs["humidity"])
    assert frame.cells[0].color == (255, 255, 255)
    assert frame.cells[1].color == (0, 0, 255)


def test_grass_pov_mixes_green_and_yellow():
    state = kernel.init_simulation("pastoral", {"width": 3, "height": 1,
                                                "herd_size": 0,
                                                "tree_count": 0}, seed=1)
    state.patch_attrs["fresh"] = [1.0, 0.0, 0.0]
    state.patch_attrs["dry"] = [0.0, 1.0, 0.0]
    frame = render_pov(state, kernel.get_model("pastoral").povs["grass"])
    assert frame.cells[0].color == (0, 255, 0)      # all fresh: green
    assert frame.cells[1].color == (255, 255, 0)    # all dry: yellow
    assert frame.cells[2].color == (255, 255, 255)  # bare: white


def test_agents_render_ordered_by_id():
    state = kernel.init_simulation("pastoral", {"herd_size": 4,
                                                "tree_count": 2}, seed=6)
    frame = render_pov(state, kernel.get_model("pastoral").povs["grass"])
    ids = [(eid.kind, eid.index) for eid, _, _, _ in frame.agents]
    assert ids == sorted(ids)
    kinds = {eid.kind for eid, _, _, _ in frame.agents}
    assert kinds == {"cow", "tree"}
    for eid, _, _, va in frame.agents:
        if eid.kind == "cow":
            assert (va.color, va.shape, va.size) == ((255, 0, 0), "circle", 0.6)
        else:
            assert (va.color, va.shape, va.size) == ((255, 105, 180), "circle", 0.5)


def test_render_leaves_state_unchanged():
    state = kernel.init_simulation("pastoral", {}, seed=2)
    before = state.state_hash()
    model = kernel.get_model("pastoral")
    render_pov(state, model.povs["grass"])
    render_pov(state, model.povs["humidity"])
    assert state.state_hash() == before


def test_multiple_povs_independent_of_render_order():
    state = kernel.init_simulation("pastoral", {}, seed=3)
    model = kernel.get_model("pastoral")
    a1 = render_pov(state, model.povs["grass"])
    b1 = render_pov(state, model.povs["humidity"])
    b2 = render_pov(state, model.povs["humidity"])
    a2 = render_pov(state, model.povs["grass"])
    assert a1.to_wire() == a2.to_wire()
    assert b1.to_wire() == b2.to_wire()


def test_visual_attrs_validation():
    with pytest.raises(ValueError):
        VisualAttrs((300, 0, 0))
    with pytest.raises(ValueError):
        VisualAttrs((0, 0, 0), "circle", 0.0)
    with pytest.raises(ValueError):
        VisualAttrs((0, 0, 0), "triangle", 0.5)


def test_probe_matches_stored_snapshot_reeval():
    from parsim.timetravel import record_run
    state = kernel.init_simulation("game-of-life",
                                   {"width": 8, "height": 8}, seed=4)
    timeline = record_run(state, 10)
    model = kernel.get_model("game-of-life")
    for t in (0, 3, 7, 10):
        snap = timeline.state_at(t)
        assert sample_probes(snap, model.probes) == snap.probe_values
