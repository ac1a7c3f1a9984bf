"""Seat-balanced round-robin over agents and maps."""

from __future__ import annotations

import csv
import hashlib
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Optional

from ..game.maps import load_map
from ..game.state import MapSpec
from ..game.units import load_unit_stats
from .agents import AgentSettings, AgentSpec
from .match import MatchRecord, run_match
from .scoring import ScoreTable, fmt, score_table

WORKERS_ENV = "RTSLAB_WORKERS"

MATCH_COLUMNS = ("map", "planner", "agent0", "agent1", "seed", "winner", "cycles",
                 "mean_ms_a0", "mean_ms_a1", "eval_ns_a0", "eval_ns_a1")


@dataclass(frozen=True)
class TournamentConfig:
    maps: tuple = ("m1",)
    agents: tuple = ()
    games_per_pairing: int = 10
    wall_ms: float = 20.0
    max_cycles: int = 10_000
    seed: int = 0
    parallel_matches: int = 1
    settings: AgentSettings = field(default_factory=AgentSettings)
    stats_path: Optional[str] = None

    def __post_init__(self):
        agents = tuple(str(AgentSpec.parse(a)) for a in self.agents)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(agents) < 2:
            raise ValueError("a tournament needs at least 2 agents")
        if len(set(agents)) != len(agents):
            raise ValueError("agent specs must be distinct")
        if not self.maps:
            raise ValueError("a tournament needs at least one map")
        if self.games_per_pairing < 2 or self.games_per_pairing % 2:
            raise ValueError("games_per_pairing must be a positive even number")
        if self.max_cycles < 1:
            raise ValueError("max_cycles must be >= 1")
        if self.parallel_matches < 1:
            raise ValueError("parallel_matches must be >= 1")

    def agent_settings(self) -> AgentSettings:
        s = self.settings
        return replace(s, budget=replace(s.budget, wall_ms=float(self.wall_ms)))


@dataclass(frozen=True)
class MatchJob:
    index: int
    map_source: object
    agent0: str
    agent1: str
    seed: int
    max_cycles: int
    settings: AgentSettings
    stats_path: Optional[str] = None


def match_seed(master: int, map_name: str, a: str, b: str, game: int) -> int:
    h = hashlib.sha256(f"{master}|{map_name}|{a}|{b}|{game}".encode()).digest()
    return int.from_bytes(h[:8], "big") >> 1


def _map_name(source) -> str:
    return source.name if isinstance(source, MapSpec) else str(source)


def plan_matches(cfg: TournamentConfig) -> list[MatchJob]:
    """Every unordered pair plays ``games_per_pairing`` games per map, seats swapped halfway."""
    jobs = []
    settings = cfg.agent_settings()
    half = cfg.games_per_pairing // 2
    for m in cfg.maps:
        name = _map_name(m)
        for a, b in combinations(cfg.agents, 2):
            for g in range(cfg.games_per_pairing):
                p0, p1 = (a, b) if g < half else (b, a)
                jobs.append(MatchJob(len(jobs), m, p0, p1, match_seed(cfg.seed, name, a, b, g),
                                     cfg.max_cycles, settings, cfg.stats_path))
    return jobs


def play_job(job: MatchJob) -> MatchRecord:
    """Run one job; failures are captured in the record instead of raised."""
    try:
        spec = job.map_source if isinstance(job.map_source, MapSpec) else load_map(job.map_source)
        stats = None if job.stats_path is None else load_unit_stats(job.stats_path)
        return run_match(spec, job.agent0, job.agent1, max_cycles=job.max_cycles,
                         seed=job.seed, settings=job.settings, stats=stats)
    except Exception as exc:  # noqa: BLE001 - recorded, not fatal
        return MatchRecord(map=_map_name(job.map_source), agent0=job.agent0, agent1=job.agent1,
                           seed=job.seed, result=None, cycles=0,
                           error=f"{type(exc).__name__}: {exc}")


def resolve_workers(requested: int) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1")
        return n
    return requested


def run_round_robin(cfg: TournamentConfig, progress=None) -> tuple[ScoreTable, list[MatchRecord]]:
    """Play the whole schedule; records come back in schedule order whatever the worker count."""
    jobs = plan_matches(cfg)
    workers = resolve_workers(cfg.parallel_matches)
    records: list[Optional[MatchRecord]] = [None] * len(jobs)
    if workers == 1:
        for job in jobs:
            records[job.index] = play_job(job)
            if progress:
                progress(records[job.index])
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for job, rec in zip(jobs, pool.map(play_job, jobs)):
                records[job.index] = rec
                if progress:
                    progress(rec)
    return score_table(records), records


def matches_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MATCH_COLUMNS)
    for r in records:
        virtual = r.virtual_clock
        w.writerow([
            r.map, r.planner, r.agent0, r.agent1, r.seed,
            "ERROR" if r.winner is None else r.winner.name, r.cycles,
            fmt(r.mean_ms[0]), fmt(r.mean_ms[1]),
            # wall-clock eval timings would break byte-identical reruns
            "" if virtual else fmt(r.eval_ns_per_call(0)),
            "" if virtual else fmt(r.eval_ns_per_call(1)),
        ])
    return buf.getvalue()


def timing_csv(records) -> str:
    """Wall-clock evaluation timings, kept apart from the reproducible match table."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["map", "agent0", "agent1", "seed", "eval_calls_a0", "eval_calls_a1",
                "eval_ns_a0", "eval_ns_a1"])
    for r in records:
        w.writerow([r.map, r.agent0, r.agent1, r.seed, r.eval_calls[0], r.eval_calls[1],
                    fmt(r.eval_ns_per_call(0)), fmt(r.eval_ns_per_call(1))])
    return buf.getvalue()
