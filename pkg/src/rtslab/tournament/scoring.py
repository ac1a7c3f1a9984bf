"""Score tables: win 1, draw 0.5, loss 0, averaged over games played."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, field

from .agents import VARIANTS, AgentSpec


def fmt(x: float) -> str:
    """Fixed 6-significant-digit formatting for diff-stable outputs."""
    return f"{x:.6g}"


@dataclass
class ScoreTable:
    # (map, planner) -> agent -> (points, games)
    groups: dict = field(default_factory=dict)
    # (map, agent_a, agent_b) -> (points of a, games)
    pairings: dict = field(default_factory=dict)

    def score(self, map_name: str, planner: str, agent: str) -> float:
        pts, games = self.groups[(map_name, planner)][agent]
        return pts / games

    def aggregate(self) -> dict[str, float]:
        """Per-agent score over every map and planner grouping."""
        tot = defaultdict(lambda: [0.0, 0])
        for per_agent in self.groups.values():
            for agent, (pts, games) in per_agent.items():
                tot[agent][0] += pts
                tot[agent][1] += games
        return {a: p / g for a, (p, g) in sorted(tot.items())}

    def pairing_score(self, map_name: str, a: str, b: str) -> float:
        pts, games = self.pairings[(map_name, a, b)]
        return pts / games

    def to_csv(self) -> str:
        """Rows are (map, planner); columns are evaluation variants."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["map", "planner", *VARIANTS])
        for (map_name, planner), per_agent in sorted(self.groups.items()):
            by_variant = {}
            for agent, (pts, games) in per_agent.items():
                by_variant[AgentSpec.parse(agent).variant] = pts / games
            w.writerow([map_name, planner,
                        *(fmt(by_variant[v]) if v in by_variant else "" for v in VARIANTS)])
        return buf.getvalue()

    def pairings_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["map", "agent", "opponent", "score", "games"])
        for (m, a, b), (pts, games) in sorted(self.pairings.items()):
            w.writerow([m, a, b, fmt(pts / games), games])
        return buf.getvalue()


def score_table(records) -> ScoreTable:
    records = [r for r in records if r.result is not None]
    if not records:
        raise ValueError("score_table needs at least one completed match")
    groups = defaultdict(lambda: defaultdict(lambda: [0.0, 0]))
    pairings = defaultdict(lambda: [0.0, 0])
    for r in records:
        p0, p1 = r.points()
        for agent, pts in ((r.agent0, p0), (r.agent1, p1)):
            cell = groups[(r.map, AgentSpec.parse(agent).planner)][agent]
            cell[0] += pts
            cell[1] += 1
        for a, b, pts in ((r.agent0, r.agent1, p0), (r.agent1, r.agent0, p1)):
            cell = pairings[(r.map, a, b)]
            cell[0] += pts
            cell[1] += 1
    return ScoreTable(
        groups={k: {a: tuple(v) for a, v in sorted(d.items())} for k, d in groups.items()},
        pairings={k: tuple(v) for k, v in pairings.items()},
    )
