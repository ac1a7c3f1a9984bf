"""Portfolio greedy search: per-unit script assignment by playout hill climbing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..game.rules import needs_decision, run_script_playout, winner
from ..game.state import GameState
from .base import Decision, Evaluator, SearchBudget
from .scripts import Script, default_scripts, script_action


@dataclass(frozen=True)
class PortfolioConfig:
    scripts: tuple = field(default_factory=default_scripts)
    response_iterations: int = 1
    playout_horizon: Optional[int] = None  # falls back to the budget's horizon

    def __post_init__(self):
        scripts = tuple(s if isinstance(s, Script) else Script(s) for s in self.scripts)
        object.__setattr__(self, "scripts", scripts)
        if len(scripts) < 1:
            raise ValueError("portfolio needs at least one script")
        if self.response_iterations < 1:
            raise ValueError("response_iterations must be >= 1")
        if self.playout_horizon is not None and self.playout_horizon < 1:
            raise ValueError("playout_horizon must be >= 1")


@dataclass(frozen=True)
class Assignment:
    """A default script plus per-unit overrides (units born later use the default)."""

    default: Script
    overrides: tuple = ()  # sorted (unit_id, Script) pairs

    def script_for(self, uid: int) -> Script:
        for u, s in self.overrides:
            if u == uid:
                return s
        return self.default

    def with_unit(self, uid: int, script: Script) -> "Assignment":
        rest = dict(self.overrides)
        rest[uid] = script
        pruned = tuple(sorted((u, s) for u, s in rest.items() if s != self.default))
        return Assignment(self.default, pruned)

    def is_uniform(self) -> bool:
        return not self.overrides

    def __str__(self):
        if not self.overrides:
            return str(self.default)
        extra = ",".join(f"{u}={s}" for u, s in self.overrides)
        return f"{self.default}[{extra}]"

    def __call__(self, state: GameState, player: int) -> list:
        if self.is_uniform():
            return list(script_action(state, player, self.default).values())
        cache = {}
        out = []
        for u in sorted(state.units.values(), key=lambda u: u.id):
            if u.owner != player or u.action is not None:
                continue
            s = self.script_for(u.id)
            if s not in cache:
                cache[s] = script_action(state, player, s)
            act = cache[s].get(u.id)
            if act is not None:
                out.append(act)
        return out


class _OutOfBudget(Exception):
    pass


class _Portfolio:
    def __init__(self, state, player, budget, cfg, evaluate, clock):
        self.state = state
        self.me = player
        self.budget = budget
        self.cfg = cfg
        self.evaluate = evaluate
        self.clock = clock
        self.horizon = cfg.playout_horizon or budget.playout_horizon
        self.playouts = 0
        self.steps = 0
        self.table: dict = {}

    def _step(self, _s):
        self.steps += 1
        self.clock.tick()
        if self.clock.elapsed_ms() >= self.budget.deadline_ms:
            raise _OutOfBudget

    def score(self, mine: Assignment, theirs: Assignment) -> float:
        key = (mine, theirs)
        if key in self.table:
            return self.table[key]
        if self.clock.elapsed_ms() >= self.budget.deadline_ms:
            raise _OutOfBudget
        pols = (mine, theirs) if self.me == 0 else (theirs, mine)
        end = run_script_playout(self.state, pols[0], pols[1], self.horizon, on_step=self._step)
        self.playouts += 1
        v = self.evaluate(end)
        self.table[key] = v
        return v

    def units(self, player):
        return sorted(u.id for u in self.state.units.values() if u.owner == player)

    def improve(self, mine: Assignment, theirs: Assignment, for_me: bool):
        """One hill-climbing pass over a side's units, lowest id first."""
        cur = mine if for_me else theirs
        best = self.score(mine, theirs)
        for uid in self.units(self.me if for_me else 1 - self.me):
            for s in self.cfg.scripts:
                if s == cur.script_for(uid):
                    continue
                cand = cur.with_unit(uid, s)
                v = self.score(cand, theirs) if for_me else self.score(mine, cand)
                if (v > best) if for_me else (v < best):
                    best, cur = v, cand
                    if for_me:
                        mine = cur
                    else:
                        theirs = cur
        return mine, theirs


def portfolio_decide(state: GameState, player: int, budget: SearchBudget,
                     cfg: Optional[PortfolioConfig], evaluate: Evaluator, *, clock=None) -> Decision:
    """Choose a script assignment for ``player`` and return its orders at the root.

    Both sides are seeded with their best uniform script against the first
    script, then refined by alternating hill-climbing passes. The final pick is
    the candidate (each uniform script plus the refined assignment) whose worst
    playout value over the opponent's uniform scripts is highest.
    """
    if player not in (0, 1):
        raise ValueError(f"player must be 0 or 1, got {player!r}")
    cfg = cfg or PortfolioConfig()
    clock = clock or budget.make_clock()
    clock.start()
    scripts = cfg.scripts
    uniform = [Assignment(s) for s in scripts]
    first = uniform[0]

    def done(assignment, value, completed, timed_out, pf=None, worst=None):
        acts = tuple(assignment(state, player)) if winner(state) is None else ()
        info = {"assignment": str(assignment)}
        if pf is not None:
            info.update(playouts=pf.playouts, worst_case=worst,
                        table={(str(a), str(b)): v for (a, b), v in pf.table.items()})
        return Decision(player, acts, value, completed, pf.steps if pf else 0,
                        clock.elapsed_ms(), timed_out, info)

    if winner(state) is not None or not needs_decision(state, player):
        return done(first, evaluate(state), 0, False)
    if len(scripts) == 1:
        return done(first, evaluate(state), 1, False)

    pf = _Portfolio(state, player, budget, cfg, evaluate, clock)
    mine = theirs = first
    iterations = 0
    try:
        mine = max(uniform, key=lambda a: (pf.score(a, first), -uniform.index(a)))
        theirs = min(uniform, key=lambda a: (pf.score(mine, a), uniform.index(a)))
        for _ in range(cfg.response_iterations):
            mine, theirs = pf.improve(mine, theirs, True)
            mine, theirs = pf.improve(mine, theirs, False)
            iterations += 1
        candidates = list(dict.fromkeys(uniform + [mine]))
        worst = {c: min(pf.score(c, o) for o in uniform) for c in candidates}
    except _OutOfBudget:
        if not pf.table:
            return done(first, evaluate(state), 0, True, pf)
        # fall back to the best fully scored candidate seen so far
        scored = {}
        for (a, o), v in pf.table.items():
            scored.setdefault(a, {})[o] = v
        full = {a: min(r.values()) for a, r in scored.items() if all(o in r for o in uniform)}
        if full:
            pick = max(full, key=lambda a: full[a])
            return done(pick, full[pick], iterations, True, pf, full[pick])
        pick = max(scored, key=lambda a: min(scored[a].values()))
        return done(pick, min(scored[pick].values()), iterations, True, pf)
    pick = max(candidates, key=lambda c: worst[c])
    return done(pick, worst[pick], iterations, False, pf, worst[pick])
