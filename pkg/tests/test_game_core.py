import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from rtslab.game import (
    BUNDLED_MAPS,
    EndReason,
    IllegalActionError,
    MapError,
    UnitAction,
    UnitKind,
    Verb,
    Winner,
    advance,
    default_unit_stats,
    idle,
    is_point_symmetric,
    legal_actions,
    load_map,
    load_unit_stats,
    map_to_document,
    new_game,
    run_script_playout,
    skip_quiet_cycles,
    state_from_dict,
    state_to_dict,
    winner,
)
from rtslab.game.units import StatsError, parse_unit_stats
from rtslab.planners import Script, ScriptName

from conftest import assert_mirrored, make_state, random_policy


# --- units and maps ---------------------------------------------------------

def test_default_stats_match_reference_table():
    s = default_unit_stats()
    expect = {
        UnitKind.MAINBASE: (10, 10), UnitKind.RAX: (5, 4), UnitKind.WORKER: (1, 1),
        UnitKind.LIGHT: (2, 4), UnitKind.HEAVY: (3, 8), UnitKind.RANGE: (2, 1),
    }
    for kind, (cost, hp) in expect.items():
        assert (s[kind].cost, s[kind].max_hp) == (cost, hp)
    assert s[UnitKind.RANGE].attack_range == 3
    assert s[UnitKind.MAINBASE].produces == frozenset({UnitKind.WORKER})
    assert s[UnitKind.RAX].produces == frozenset({UnitKind.LIGHT, UnitKind.RANGE, UnitKind.HEAVY})


def _stats_doc():
    from importlib.resources import files
    return json.loads((files("rtslab.data") / "unit_stats.json").read_text())


def test_stats_reject_bad_schema_and_invariants(tmp_path):
    doc = _stats_doc()
    with pytest.raises(StatsError, match="schema"):
        parse_unit_stats(dict(doc, schema=2))
    broken = json.loads(json.dumps(doc))
    broken["MAINBASE"]["produces"] = ["LIGHT"]
    with pytest.raises(ValueError):
        parse_unit_stats(broken)
    broken = json.loads(json.dumps(doc))
    broken["WORKER"]["cost"] = 0
    with pytest.raises(ValueError):
        parse_unit_stats(broken)
    with pytest.raises(StatsError, match="unknown unit kind"):
        parse_unit_stats({"schema": 1, "TANK": {}})
    p = tmp_path / "stats.json"
    p.write_text(json.dumps(doc))
    assert load_unit_stats(p)[UnitKind.WORKER].cost == 1


def test_synthetic_partial_stats_table():
    doc = _stats_doc()
    table = parse_unit_stats({"schema": 1, "WORKER": doc["WORKER"]})
    assert set(table) == {UnitKind.WORKER}


def test_bundled_m1_has_two_bases_two_workers_symmetric():
    m = load_map("m1")
    assert (m.width, m.height) == (16, 16)
    kinds = [k for _, k, _ in m.initial_units]
    assert kinds.count(UnitKind.MAINBASE) == 2 and kinds.count(UnitKind.WORKER) == 2
    assert is_point_symmetric(m)


@pytest.mark.parametrize("name", BUNDLED_MAPS)
def test_all_bundled_maps_symmetric_and_round_trip(name):
    m = load_map(name)
    assert is_point_symmetric(m)
    assert load_map(json.dumps(map_to_document(m))) == m


def test_empty_map_is_valid():
    m = load_map('{"schema": 1, "width": 8, "height": 8, "resources": [], "units": []}')
    assert m.initial_units == () and new_game(m).units == {}


def test_overlapping_units_reported_with_location():
    doc = {"schema": 1, "width": 8, "height": 8, "units": [
        {"owner": 0, "kind": "WORKER", "x": 3, "y": 3},
        {"owner": 1, "kind": "WORKER", "x": 3, "y": 3}]}
    with pytest.raises(MapError, match=r"units\[1\] at \(3,3\) overlaps units\[0\]"):
        load_map(json.dumps(doc))


@pytest.mark.parametrize("doc, pattern", [
    ('{"width": 8, "height": 8, "units": [{"owner": 0, "kind": "WORKER", "x": 9, "y": 0}]}',
     "out of bounds"),
    ('{"width": 4, "height": 8}', "width=4"),
    ('{"width": 8, "height": 8,', "parse error at line 1"),
    ('{"width": 8, "height": 8, "units": [{"owner": 0, "kind": "TANK", "x": 1, "y": 1}]}',
     "unknown kind"),
])
def test_map_errors(doc, pattern):
    with pytest.raises(MapError, match=pattern):
        load_map(doc)


# --- legal actions ----------------------------------------------------------

def test_lone_worker_only_idle_and_moves():
    s = make_state(units=[(0, UnitKind.WORKER, (3, 3))])
    acts = legal_actions(s, 0)[0]
    assert {a.verb for a in acts} == {Verb.IDLE, Verb.MOVE}
    assert len([a for a in acts if a.verb == Verb.MOVE]) == 4


def test_worker_next_to_pile_can_harvest():
    s = make_state(units=[(0, UnitKind.WORKER, (3, 3))], piles=[((3, 4), 5)])
    assert any(a.verb == Verb.HARVEST and a.target == (3, 4) for a in legal_actions(s, 0)[0])


def test_poor_base_cannot_produce():
    s = make_state(units=[(0, UnitKind.MAINBASE, (3, 3))], resources=(0, 0))
    assert all(a.verb != Verb.PRODUCE for a in legal_actions(s, 0)[0])
    rich = make_state(units=[(0, UnitKind.MAINBASE, (3, 3))], resources=(1, 0))
    assert any(a.verb == Verb.PRODUCE for a in legal_actions(rich, 0)[0])


def test_no_idle_units_gives_empty_set_and_bad_player_rejected():
    s = make_state()
    assert legal_actions(s, 1) == {}
    with pytest.raises(ValueError):
        legal_actions(s, 2)


def test_durations_match_unit_periods():
    s = make_state(units=[(0, UnitKind.LIGHT, (3, 3)), (1, UnitKind.WORKER, (3, 4))])
    spec = s.units[0].spec
    for a in legal_actions(s, 0)[0]:
        if a.verb == Verb.MOVE:
            assert a.duration == spec.move_period
        if a.verb == Verb.ATTACK:
            assert a.duration == spec.attack_period


# --- advance ----------------------------------------------------------------

def test_idle_step_is_identity_plus_cycle():
    s = new_game(load_map("m1"))
    nxt = advance(s, {0: [idle(0)], 1: [idle(2)]})
    assert nxt.cycle == s.cycle + 1
    a, b = state_to_dict(s), state_to_dict(nxt)
    a.pop("cycle"), b.pop("cycle")
    assert a == b


def test_mutual_kill_removes_both():
    s = make_state(units=[(0, UnitKind.WORKER, (3, 3)), (1, UnitKind.WORKER, (3, 4))])
    d = s.units[0].spec.attack_period
    s = advance(s, {0: [UnitAction(0, Verb.ATTACK, 1, None, d)],
                    1: [UnitAction(1, Verb.ATTACK, 0, None, d)]})
    for _ in range(d - 1):
        s = advance(s)
    assert s.units == {}
    r = winner(s)
    assert r.winner == Winner.DRAW and r.reason == EndReason.ELIMINATION


def test_return_banks_cargo():
    s = make_state(units=[(0, UnitKind.MAINBASE, (3, 3)), (0, UnitKind.WORKER, (3, 4), {"carried": 1})],
                   resources=(2, 0))
    spec = s.units[1].spec
    s = advance(s, {0: [UnitAction(1, Verb.RETURN, 0, None, spec.return_period)]})
    s = skip_quiet_cycles(s, 1000)
    assert s.player_resources[0] == 3 and s.units[1].carried == 0


def test_harvest_moves_pile_to_cargo():
    s = make_state(units=[(0, UnitKind.WORKER, (3, 3))], piles=[((3, 4), 5)])
    spec = s.units[0].spec
    s = advance(s, {0: [UnitAction(0, Verb.HARVEST, (3, 4), None, spec.harvest_period)]})
    s = skip_quiet_cycles(s, 1000)
    assert s.units[0].carried == spec.harvest_amount
    assert s.piles[(3, 4)] == 5 - spec.harvest_amount


def test_same_player_cell_conflict_lowest_id_wins():
    s = make_state(units=[(0, UnitKind.WORKER, (2, 3)), (0, UnitKind.WORKER, (4, 3))])
    p = s.units[0].spec.move_period
    s = advance(s, {0: [UnitAction(0, Verb.MOVE, (3, 3), None, p),
                        UnitAction(1, Verb.MOVE, (3, 3), None, p)]})
    assert s.units[0].action is not None and s.units[1].action is None
    s = skip_quiet_cycles(s, 1000)
    assert s.units[0].pos == (3, 3) and s.units[1].pos == (4, 3)


def test_cross_player_cell_conflict_cancels_both():
    s = make_state(units=[(0, UnitKind.WORKER, (2, 3)), (1, UnitKind.WORKER, (4, 3))])
    p = s.units[0].spec.move_period
    s = advance(s, {0: [UnitAction(0, Verb.MOVE, (3, 3), None, p)],
                    1: [UnitAction(1, Verb.MOVE, (3, 3), None, p)]})
    assert s.units[0].action is None and s.units[1].action is None


def test_illegal_action_reports_unit_and_verb():
    s = make_state(units=[(0, UnitKind.WORKER, (3, 3))])
    with pytest.raises(IllegalActionError, match=r"unit 0 \(ATTACK\)"):
        advance(s, {0: [UnitAction(0, Verb.ATTACK, 99, None, 5)]})
    with pytest.raises(IllegalActionError, match="belongs to player 0"):
        advance(s, {1: [idle(0)]})


def test_produce_deducts_cost_and_spawns_unit():
    s = make_state(units=[(0, UnitKind.MAINBASE, (3, 3))], resources=(3, 0))
    period = s.stats[UnitKind.WORKER].produce_period  # time is set by the produced kind
    s = advance(s, {0: [UnitAction(0, Verb.PRODUCE, (3, 4), UnitKind.WORKER, period)]})
    assert s.player_resources[0] == 2
    s = skip_quiet_cycles(s, 10_000)
    assert s.cycle == period
    assert any(u.kind == UnitKind.WORKER and u.pos == (3, 4) for u in s.units.values())


# --- winner ------------------------------------------------------------------

def test_winner_rules():
    s = make_state(units=[(0, UnitKind.WORKER, (1, 1))])
    assert winner(s).winner == Winner.P0
    both = make_state(units=[(0, UnitKind.WORKER, (1, 1)), (1, UnitKind.WORKER, (5, 5))], max_cycles=7)
    assert winner(both) is None
    both.cycle = 7
    r = winner(both)
    assert r.winner == Winner.DRAW and r.reason == EndReason.CYCLE_CAP and r.end_cycle == 7


# --- playouts -----------------------------------------------------------------

def test_playout_horizon_one_is_one_advance():
    s = new_game(load_map("m1"))
    rush = Script(ScriptName.WORKER_RUSH)
    out = run_script_playout(s, rush, rush, 1)
    assert out.cycle == 1
    with pytest.raises(ValueError):
        run_script_playout(s, rush, rush, 0)


def test_worker_rush_eliminates_empty_policy_on_m1():
    s = new_game(load_map("m1"))
    out = run_script_playout(s, Script(ScriptName.WORKER_RUSH), lambda st, p: [], 2000)
    r = winner(out)
    assert r is not None and r.winner == Winner.P0 and r.reason == EndReason.ELIMINATION


def test_identical_scripts_keep_mirror_symmetry():
    from rtslab.evaluation import evaluate

    s = new_game(load_map("m1"))
    rush = Script(ScriptName.LIGHT_RUSH)
    out = run_script_playout(s, rush, rush, 300)
    assert_mirrored(out)
    for kind in ("L", "S", "SQ"):
        assert evaluate(out, kind).s_eval == 0.0


# --- invariants ------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), name=st.sampled_from(BUNDLED_MAPS))
def test_conservation_and_unit_bounds_under_random_play(seed, name):
    rng = random.Random(seed)
    s = new_game(load_map(name))
    total = s.resource_total()
    pol = random_policy(rng)
    for _ in range(60):
        s = advance(s, {0: pol(s, 0), 1: pol(s, 1)})
        assert s.resource_total() == total
        assert min(s.player_resources) >= 0
        assert s.free_resources == sum(s.piles.values())
        cells = set()
        for u in s.units.values():
            assert 0 < u.hp <= u.spec.max_hp
            assert s.in_bounds(u.x, u.y) and u.pos not in cells
            assert u.carried == 0 or u.kind == UnitKind.WORKER
            cells.add(u.pos)
        if winner(s):
            break


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_advance_is_pure_and_replayable(seed):
    rng = random.Random(seed)
    s0 = new_game(load_map("m0"))
    pol = random_policy(rng)
    log, s = [], s0
    for _ in range(40):
        joint = {0: pol(s, 0), 1: pol(s, 1)}
        before = s.digest()
        nxt = advance(s, joint)
        assert s.digest() == before
        log.append(joint)
        s = nxt
    replay = s0
    for joint in log:
        replay = advance(replay, joint)
    assert replay.digest() == s.digest()


def test_skip_quiet_cycles_matches_stepping():
    s = new_game(load_map("m1"))
    rush = Script(ScriptName.WORKER_RUSH)
    s = advance(s, {0: rush(s, 0), 1: rush(s, 1)})
    stepped = s
    target = skip_quiet_cycles(s, 10_000)
    while stepped.cycle < target.cycle:
        stepped = advance(stepped)
    assert stepped.digest() == target.digest()


def test_state_serialization_round_trip(m1):
    s = run_script_playout(new_game(m1), Script(ScriptName.WORKER_RUSH),
                           Script(ScriptName.HEAVY_RUSH), 400)
    back = state_from_dict(json.loads(json.dumps(state_to_dict(s))), m1)
    assert back.digest() == s.digest()
