"""Per-call latency of static versus adaptive evaluation on recorded search traces.

A trace is one root decision: the root state plus every state the search
scored under it. The adaptive evaluator pays its update once per root, as in
play, and the same leaf states are then scored by both evaluators.
"""

from __future__ import annotations

import gc
import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from ..adaptive import AdaptiveEvaluator
from ..evaluation import StaticEvaluator
from ..game.maps import load_map, map_to_document
from ..game.rules import advance, needs_decision, skip_quiet_cycles, winner
from ..game.serialize import state_from_dict, state_to_dict
from ..game.state import GameState, MapSpec, new_game
from ..planners import SearchBudget, idrtminimax_decide

MIN_CORPUS = 100


class CorpusError(ValueError):
    pass


@dataclass
class Trace:
    root: GameState
    leaves: list


def sample_roots(map_spec: MapSpec, n_roots: int = MIN_CORPUS, seed: int = 0,
                 budget: Optional[SearchBudget] = None, max_cycles: int = 10_000) -> list[GameState]:
    """Root states from a self-play game between a Simple and a Lanchester searcher."""
    import random

    budget = budget or SearchBudget(wall_ms=20.0, ms_per_node=0.1)
    scorers = [StaticEvaluator("S", player=0).fit().scorer(),
               StaticEvaluator("L", player=1).fit().scorer()]
    rngs = [random.Random(seed), random.Random(seed + 1)]
    roots = []
    state = new_game(map_spec, max_cycles=max_cycles)
    while len(roots) < n_roots and winner(state) is None:
        joint = {}
        for p in (0, 1):
            if needs_decision(state, p):
                if p == 0:
                    roots.append(state)
                d = idrtminimax_decide(state, p, budget, scorers[p], rng=rngs[p])
                if d.actions:
                    joint[p] = d.actions
        state = advance(state, joint) if joint else skip_quiet_cycles(state, state.max_cycles)
    return roots[:n_roots]


def expand_traces(roots, budget: Optional[SearchBudget] = None) -> list[Trace]:
    """Re-run a virtual-clock search from every root and keep the states it scored."""
    budget = budget or SearchBudget(wall_ms=20.0, ms_per_node=0.1)
    scorer = StaticEvaluator("L").fit().scorer()
    traces = []
    for root in roots:
        leaves = []

        def record(s, _leaves=leaves):
            _leaves.append(s)
            return scorer(s)

        idrtminimax_decide(root, 0, budget, record)
        traces.append(Trace(root, leaves))
    return traces


def write_corpus(path, map_spec: MapSpec, roots) -> None:
    doc = {"schema": 1, "map": map_to_document(map_spec),
           "roots": [state_to_dict(s) for s in roots]}
    with open(path, "w") as fh:
        json.dump(doc, fh, separators=(",", ":"))


def read_corpus(path) -> list[GameState]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise CorpusError(f"corpus file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise CorpusError(f"corpus {path}: invalid JSON at line {exc.lineno}") from exc
    if doc.get("schema") != 1:
        raise CorpusError(f"corpus {path}: unsupported schema {doc.get('schema')!r}")
    spec = load_map(json.dumps(doc["map"]))
    return [state_from_dict(s, spec) for s in doc["roots"]]


@dataclass
class FunctionTiming:
    kind: str
    calls_static: int
    calls_dynamic: int
    mean_ns_static: float
    p99_ns_static: float
    mean_ns_dynamic: float
    p99_ns_dynamic: float
    overhead_ratio: float
    round_ratios: list = field(default_factory=list)


@dataclass
class TimingStats:
    functions: dict
    n_traces: int
    n_leaves: int
    repetitions: int
    rounds: int

    def ratios(self) -> dict[str, float]:
        return {k: f.overhead_ratio for k, f in self.functions.items()}

    def to_json(self) -> str:
        doc = asdict(self)
        return json.dumps(doc, indent=2, sort_keys=True)


def _time_pass(evaluator, traces, target_calls: int, samples: list) -> int:
    """Score traces in order until ``target_calls`` leaf calls; returns the call count."""
    clock = time.perf_counter_ns
    calls = 0
    while calls < target_calls:
        for tr in traces:
            t0 = clock()
            evaluator.observe(tr.root)
            score = evaluator.scorer()
            setup = clock() - t0
            first = True
            for leaf in tr.leaves:
                t = clock()
                score(leaf)
                dt = clock() - t
                if first:
                    dt += setup
                    first = False
                samples.append(dt)
            calls += len(tr.leaves)
            if calls >= target_calls:
                break
    return calls


def _p99(xs) -> float:
    xs = sorted(xs)
    return float(xs[min(len(xs) - 1, int(0.99 * len(xs)))])


def measure_eval_overhead(pairs, corpus, repetitions: int = 100_000, rounds: int = 10,
                          warmup_calls: int = 2_000) -> TimingStats:
    """Time each (static, dynamic) evaluator pair over the traces in ``corpus``.

    ``pairs`` maps a label to two unfitted evaluators; ``corpus`` is a list of
    :class:`Trace`. Each round times both members back to back (alternating
    which goes first) over ``repetitions / rounds`` calls; the reported ratio
    is the median of the per-round mean ratios.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    traces = [t for t in corpus if t.leaves]
    if len(traces) < MIN_CORPUS:
        raise CorpusError(f"need at least {MIN_CORPUS} traces with scored states, got {len(traces)}")
    per_round = max(1, -(-repetitions // rounds))
    out = {}
    for label, (static, dynamic) in pairs.items():
        first_root = traces[0].root
        static.fit(first_root)
        dynamic.fit(first_root)
        _time_pass(static, traces, warmup_calls, [])
        _time_pass(dynamic, traces, warmup_calls, [])
        samples_s, samples_d, ratios = [], [], []
        calls_s = calls_d = 0
        gc_was = gc.isenabled()
        gc.disable()
        try:
            for r in range(rounds):
                rs, rd = [], []
                order = ((static, rs), (dynamic, rd)) if r % 2 == 0 else ((dynamic, rd), (static, rs))
                for ev, bucket in order:
                    n = _time_pass(ev, traces, per_round, bucket)
                    if ev is static:
                        calls_s += n
                    else:
                        calls_d += n
                ratios.append(statistics.fmean(rd) / statistics.fmean(rs))
                samples_s.extend(rs)
                samples_d.extend(rd)
        finally:
            if gc_was:
                gc.enable()
        out[label] = FunctionTiming(
            kind=label, calls_static=calls_s, calls_dynamic=calls_d,
            mean_ns_static=statistics.fmean(samples_s), p99_ns_static=_p99(samples_s),
            mean_ns_dynamic=statistics.fmean(samples_d), p99_ns_dynamic=_p99(samples_d),
            overhead_ratio=statistics.median(ratios), round_ratios=ratios,
        )
    return TimingStats(out, len(traces), sum(len(t.leaves) for t in traces), repetitions, rounds)


def default_pairs(kinds=("L", "S", "SQ")) -> dict:
    return {k: (StaticEvaluator(kind=k), AdaptiveEvaluator(kind=k)) for k in kinds}
