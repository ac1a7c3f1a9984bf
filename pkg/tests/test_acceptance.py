"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The lines are printed at the end of the pytest run (and immediately with -s).
Criteria 8 and 9 play a 150-game tournament twice and take roughly twenty
minutes together.
"""

import contextlib
import json
import math
import random
import sys
import time
from pathlib import Path

import pytest

from rtslab.adaptive import (
    AdamWMomentState,
    AdaptiveEvaluator,
    OptimizerConfig,
    bias_correct,
    optimizer_step,
    update_moments,
)
from rtslab.evaluation import (
    StaticEvaluator,
    lanchester_score,
    normalize_eval,
    simple_score,
    simple_sqrt_score,
    simple_upper_bound,
)
from rtslab.game import UnitKind, advance, load_map, new_game, run_script_playout, winner
from rtslab.evaluation import evaluate
from rtslab.planners import (
    PortfolioConfig,
    SearchBudget,
    default_scripts,
    get_script,
    idabcd_decide,
    idrtminimax_decide,
    minimax_value,
    portfolio_decide,
)
from rtslab.tournament import (
    expand_traces,
    matches_csv,
    measure_eval_overhead,
    run_round_robin,
    sample_roots,
)

from conftest import assert_mirrored, make_state, random_policy, small_random_state
from oracles import optimizer_trajectory, rel_close

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
RESULTS: dict = {}


def report(n: int, status: str, detail: str) -> None:
    line = f"criterion {n:>2}: {status:<7} {detail}"
    RESULTS[n] = line
    print(line)


@contextlib.contextmanager
def criterion(n: int, title: str):
    """Record FAIL with the assertion message if the body raises."""
    t0 = time.perf_counter()
    box = {"detail": title, "status": "PASS"}
    try:
        yield box
    except Exception as exc:
        report(n, "FAIL", f"{title}: {exc}".splitlines()[0][:200])
        raise
    seconds = box.get("seconds", time.perf_counter() - t0)
    report(n, box["status"], f"{box['detail']} [{seconds:.1f} s]")


# 1 ------------------------------------------------------------------------------

def test_c01_optimizer_matches_oracle():
    with criterion(1, "optimizer trajectories vs straight-line oracle") as box:
        rng = random.Random(1)
        cfg = OptimizerConfig()
        t0 = time.perf_counter()
        checked = 0
        for _ in range(1000):
            deltas = [rng.uniform(-10, 10) for _ in range(rng.randint(1, 100))]
            w0 = rng.uniform(0.01, 50)
            ms, w = AdamWMomentState(), w0
            for g, row in zip(deltas, optimizer_trajectory(deltas, w0)):
                rec = optimizer_step(ms, w, g, cfg)
                ms, w = rec.moments, rec.weight
                got = (ms.m_lr, ms.v_lr, rec.corrected.m_lr, rec.corrected.v_lr,
                       rec.lr, rec.dr, w)
                for a, b in zip(got, row):
                    assert rel_close(a, b, 1e-9), (a, b)
                checked += 1
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"took {elapsed:.2f} s"
        box["detail"] = f"1000 sequences, {checked} steps agree within 1e-9 rel"


# 2 ------------------------------------------------------------------------------

def test_c02_first_step_identity():
    with criterion(2, "first-step bias correction identity") as box:
        rng = random.Random(2)
        worst = 0.0
        for _ in range(100):
            g = rng.uniform(-100, 100)
            cfg = OptimizerConfig(beta1=rng.uniform(0, 0.999), beta2=rng.uniform(0, 0.9999))
            hat = bias_correct(update_moments(AdamWMomentState(), g, cfg), cfg)
            worst = max(worst, abs(hat.m_lr - g) / max(abs(g), 1e-300),
                        abs(hat.v_lr - g * g) / max(g * g, 1e-300))
        assert worst <= 1e-12, worst
        box["detail"] = f"100 triples, worst relative error {worst:.1e}"


# 3 ------------------------------------------------------------------------------

def test_c03_evaluation_hand_oracles():
    with criterion(3, "evaluation hand oracles") as box:
        simple = make_state(units=[(0, UnitKind.WORKER, (1, 1), {"carried": 1})], resources=(5, 0))
        half_light = make_state(units=[(0, UnitKind.LIGHT, (1, 1), {"hp": 2})])
        base_lights = make_state(units=[(0, UnitKind.MAINBASE, (1, 1)),
                                        (0, UnitKind.LIGHT, (3, 3)), (0, UnitKind.LIGHT, (4, 4))])
        cases = [
            ("simple worker", simple_score(simple, 0).total, 150.0),
            ("simple half light", simple_score(half_light, 0).total, 40.0),
            ("sqrt half light", simple_sqrt_score(half_light, 0).total, 80 * math.sqrt(0.5)),
            ("lanchester base+2 light", lanchester_score(base_lights, 0).total,
             0.129 * 10 + 2 ** 0.7 * 3.5),
            ("lanchester empty", lanchester_score(make_state(), 0).total, 0.0),
            ("upper bound", simple_upper_bound(make_state(piles=[((0, 0), 20)])), 800.0),
        ]
        for name, got, want in cases:
            assert abs(got - want) <= 1e-9, (name, got, want)
        # the printed four-decimal values
        assert round(simple_sqrt_score(half_light, 0).total, 4) == 56.5685
        assert round(lanchester_score(base_lights, 0).total, 4) == 6.9758
        box["detail"] = f"{len(cases)} worked examples within 1e-9"


# 4 ------------------------------------------------------------------------------

def test_c04_normalisation_properties():
    with criterion(4, "normalised advantage properties") as box:
        rng = random.Random(4)
        t0 = time.perf_counter()
        for i in range(100_000):
            scale = (1.0, 10.0, 1e3, 1e6)[i % 4]
            a, b = rng.uniform(-scale, scale), rng.uniform(-scale, scale)
            v = normalize_eval(a, b).s_eval
            assert -1.0 < v < 1.0, (a, b, v)
            assert abs(v + normalize_eval(b, a).s_eval) <= 1e-12, (a, b)
            assert normalize_eval(a, a).s_eval == 0.0
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0, f"took {elapsed:.2f} s"
        box["detail"] = f"1e5 random pairs in {elapsed:.2f} s"


# 5 ------------------------------------------------------------------------------

def test_c05_pruning_soundness():
    with criterion(5, "alpha-beta equals exhaustive minimax") as box:
        rng = random.Random(5)
        corpus = [small_random_state(rng) for _ in range(100)]
        budget = SearchBudget(wall_ms=1e9, max_depth=3, ms_per_node=0.001)
        t0 = time.perf_counter()
        compared = 0
        for s in corpus:
            assert s.width <= 4 and s.height <= 4 and len(s.units) <= 4
            for p in (0, 1):
                ev = (lambda x, p=p: evaluate(x, "L", max_player=p).s_eval)
                for decide, strict in ((idabcd_decide, False), (idrtminimax_decide, True)):
                    d = decide(s, p, budget, ev)
                    assert d.value == minimax_value(s, p, 3, ev, strict=strict), (s, p, strict)
                    compared += 1
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"took {elapsed:.1f} s"
        box["detail"] = f"{compared} root values identical at depth 3"


# 6 ------------------------------------------------------------------------------

def _duel_state(rng):
    w, h = rng.randint(5, 7), rng.randint(5, 7)
    pile_a, pile_b = (0, h - 1), (w - 1, 0)
    return make_state(w, h, units=[(0, UnitKind.WORKER, (1, 1)), (1, UnitKind.WORKER, (w - 2, h - 2))],
                      piles=[(pile_a, 10), (pile_b, 10)],
                      resources=(rng.randint(0, 8), rng.randint(0, 8)))


def test_c06_portfolio_maximin():
    with criterion(6, "portfolio maximin against enumerated 2x2 tables") as box:
        rng = random.Random(6)
        budget = SearchBudget(wall_ms=1e9, ms_per_node=0.001, playout_horizon=80)
        names = [s.name.value for s in default_scripts()]
        t0 = time.perf_counter()
        cases = decisive = 0
        # one worker a side, so uniform scripts are the whole assignment space
        while decisive < 30 and cases < 2000:
            s = _duel_state(rng)
            player = rng.randint(0, 1)
            pair = tuple(get_script(n) for n in rng.sample(names, 2))
            kind = rng.choice(["L", "S", "SQ"])
            ev = (lambda x, p=player, k=kind: evaluate(x, k, max_player=p).s_eval)
            table = {}
            for a in pair:
                for b in pair:
                    pols = (a, b) if player == 0 else (b, a)
                    table[a, b] = ev(run_script_playout(s, pols[0], pols[1],
                                                        budget.playout_horizon))
            worst = {a: min(table[a, b] for b in pair) for a in pair}
            best = max(worst.values())
            d = portfolio_decide(s, player, budget, PortfolioConfig(scripts=pair), ev)
            assert d.value == best, (worst, d.value)
            winners = [a for a in pair if worst[a] == best]
            assert any(d.actions == tuple(a(s, player)) for a in winners)
            cases += 1
            if len(winners) == 1 and d.actions != tuple(pair[1 - pair.index(winners[0])](s, player)):
                decisive += 1
        elapsed = time.perf_counter() - t0
        assert decisive >= 30, f"only {decisive} discriminating cases"
        assert elapsed < 30.0, f"took {elapsed:.1f} s"
        box["detail"] = f"{cases} enumerated cases agree, {decisive} with a unique maximin script"


# 7 ------------------------------------------------------------------------------

def test_c07_adaptive_overhead():
    with criterion(7, "adaptive / static per-call time ratio <= 1.10") as box:
        t0 = time.perf_counter()
        traces = expand_traces(sample_roots(load_map("m1"), 100, seed=0))
        pairs = {k: (StaticEvaluator(kind=k), AdaptiveEvaluator(kind=k)) for k in ("L", "S", "SQ")}
        stats = measure_eval_overhead(pairs, traces, repetitions=100_000, rounds=10)
        ratios = stats.ratios()
        elapsed = time.perf_counter() - t0
        text = ", ".join(f"{k} {v:.3f}" for k, v in ratios.items())
        assert stats.n_traces >= 100
        assert all(f.calls_static >= 100_000 and f.calls_dynamic >= 100_000
                   for f in stats.functions.values())
        assert all(v <= 1.10 for v in ratios.values()), text
        assert elapsed < 120.0, f"took {elapsed:.1f} s"
        per_call = ", ".join(f"{k} +{(f.mean_ns_dynamic - f.mean_ns_static) / 1e6:.4f} ms"
                             for k, f in stats.functions.items())
        box["detail"] = f"ratios {text}; extra per call {per_call}"


# 8 and 9 ------------------------------------------------------------------------------

FLAG_MARGIN = 0.05


@pytest.fixture(scope="module")
def desk_run():
    from rtslab.cli.config import parse_config

    doc = json.loads((CONFIGS / "desk_scale.json").read_text())
    tcfg = parse_config(doc).tournament_config()
    t0 = time.perf_counter()
    table, records = run_round_robin(tcfg)
    return tcfg, table, records, time.perf_counter() - t0


@pytest.mark.slow
def test_c08_directional_tournament(desk_run):
    with criterion(8, "adaptive beats static in aggregate") as box:
        tcfg, table, records, elapsed = desk_run
        box["seconds"] = elapsed
        assert tcfg.maps == ("m1",) and load_map("m1").width == 16
        assert tcfg.games_per_pairing == 10 and tcfg.wall_ms == 20.0
        assert len(records) >= 60 and all(r.error is None for r in records)
        agg = table.aggregate()
        dl, l_ = agg["idrtminimax:DL"], agg["idrtminimax:L"]
        dsq, sq = agg["idrtminimax:DSQ"], agg["idrtminimax:SQ"]
        gaps = {"DL-L": dl - l_, "DSQ-SQ": dsq - sq}
        text = (f"DL {dl:.3f} vs L {l_:.3f}, DSQ {dsq:.3f} vs SQ {sq:.3f}; "
                f"{len(records)} games")
        assert elapsed < 30 * 60, text
        lost = [k for k, g in gaps.items() if g < -FLAG_MARGIN]
        assert not lost, text
        if all(g > 0 for g in gaps.values()):
            box["detail"] = text
        else:
            box["status"] = "FLAGGED"
            box["detail"] = text + f" (gap within {FLAG_MARGIN}, not a strict win)"


@pytest.mark.slow
def test_c09_tournament_rerun_is_byte_identical(desk_run):
    with criterion(9, "rerun with the same seed gives identical matches CSV") as box:
        tcfg, _, records, _ = desk_run
        _, again = run_round_robin(tcfg)
        first, second = matches_csv(records), matches_csv(again)
        assert first.encode() == second.encode()
        box["detail"] = f"{len(first.splitlines()) - 1} rows identical"


# 10 ------------------------------------------------------------------------------

def test_c10_engine_invariants():
    with criterion(10, "conservation, bounds and mirror symmetry") as box:
        t0 = time.perf_counter()
        cycles = 0
        rng = random.Random(10)
        maps = [load_map(n) for n in ("m1", "m2", "m3")]
        while cycles < 10_000:
            for m in maps:
                s = new_game(m)
                total = s.resource_total()
                pol = random_policy(rng)
                for _ in range(600):
                    s = advance(s, {0: pol(s, 0), 1: pol(s, 1)})
                    cycles += 1
                    assert s.resource_total() == total
                    assert min(s.player_resources) >= 0
                    for u in s.units.values():
                        assert 0 < u.hp <= u.spec.max_hp
                        assert s.in_bounds(u.x, u.y) and s.occupied.get(u.pos) == u.id
                    if winner(s):
                        break
        mirrored = 0
        for m in maps:
            for script in default_scripts():
                s = new_game(m)
                for _ in range(250):
                    s = advance(s, {p: script(s, p) for p in (0, 1)})
                    assert_mirrored(s)
                    mirrored += 1
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"took {elapsed:.1f} s"
        box["detail"] = f"{cycles} random cycles, {mirrored} mirrored cycles"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
