"""Iterative-deepening alpha-beta over durative, simultaneous joint actions.

Two move-ordering regimes share one search core:

* ``idabcd_decide`` serializes only the players that actually have a decision
  at a node, the searching player first when both do.
* ``idrtminimax_decide`` alternates strictly: every round is a ply for the
  searching player then a ply for the opponent, even if one of them can only
  pass.

In both, a round ends once its movers have chosen; the joint orders are then
issued together and the game runs to the next decision point. Depth counts
plies. Values are always from the searching player's side.
"""

from __future__ import annotations

import math
import random
from typing import Optional

from ..game.rules import advance_to_decision, needs_decision, run_script_playout, winner
from ..game.state import GameState
from .base import (Decision, Evaluator, MoveGenConfig, SearchBudget, forced_idle,
                   joint_actions)
from .scripts import Script


class _Timeout(Exception):
    pass


class _Search:
    def __init__(self, player: int, budget: SearchBudget, evaluate: Evaluator, clock,
                 movegen: MoveGenConfig, strict: bool, leaf_script: Optional[Script],
                 prune: bool = True):
        self.me = player
        self.budget = budget
        self.evaluate = evaluate
        self.clock = clock
        self.movegen = movegen
        self.strict = strict
        self.leaf_script = leaf_script
        self.prune = prune
        self.nodes = 0
        self.armed = False
        self.cut_by_depth = False

    def tick(self):
        self.nodes += 1
        self.clock.tick()
        if self.armed and self.clock.elapsed_ms() >= self.budget.deadline_ms:
            raise _Timeout

    def playout_step(self, _s):
        self.clock.tick()
        if self.armed and self.clock.elapsed_ms() >= self.budget.deadline_ms:
            raise _Timeout

    def movers(self, s: GameState) -> tuple:
        me, opp = self.me, 1 - self.me
        if self.strict:
            return (me, opp)
        return tuple(p for p in (me, opp) if needs_decision(s, p))

    def children(self, s: GameState, p: int) -> list:
        if self.strict and not needs_decision(s, p):
            return [()]
        return joint_actions(s, p, self.movegen)

    def leaf(self, s: GameState, pending: dict) -> float:
        self.tick()
        if pending:
            s = advance_to_decision(s, pending, self.movegen.max_wait)
        if self.leaf_script is not None and winner(s) is None:
            script = self.leaf_script
            s = run_script_playout(s, script, script, self.budget.playout_horizon,
                                   on_step=self.playout_step)
        return self.evaluate(s)

    def decision(self, s: GameState, depth: int, alpha: float, beta: float) -> float:
        if winner(s) is not None:
            return self.leaf(s, {})
        if depth == 0:
            self.cut_by_depth = True
            return self.leaf(s, {})
        order = self.movers(s)
        if not order:
            return self.leaf(s, {})
        self.tick()
        return self.ply(s, order, 0, {}, depth, alpha, beta)

    def ply(self, s, order, idx, pending, depth, alpha, beta) -> float:
        if idx == len(order):
            nxt = advance_to_decision(s, pending, self.movegen.max_wait)
            return self.decision(nxt, depth, alpha, beta)
        if depth == 0:
            self.cut_by_depth = True
            return self.leaf(s, pending)
        p = order[idx]
        maximizing = p == self.me
        best = -math.inf if maximizing else math.inf
        for a in self.children(s, p):
            v = self.ply(s, order, idx + 1, {**pending, p: a}, depth - 1, alpha, beta)
            if maximizing:
                if v > best:
                    best = v
                if best > alpha:
                    alpha = best
            else:
                if v < best:
                    best = v
                if best < beta:
                    beta = best
            if self.prune and beta <= alpha:
                break
        return best

    def root(self, s: GameState, order: tuple, candidates: list, depth: int):
        alpha, beta = -math.inf, math.inf
        best_v, best_a = -math.inf, None
        for a in candidates:
            v = self.ply(s, order, 1, {self.me: a}, depth - 1, alpha, beta)
            if v > best_v:
                best_v, best_a = v, a
                alpha = max(alpha, v)
        return best_a, best_v


def _iterative(state: GameState, player: int, budget: SearchBudget, evaluate: Evaluator, *,
               strict: bool, clock=None, rng: Optional[random.Random] = None,
               movegen: Optional[MoveGenConfig] = None, leaf_script: Optional[Script] = None,
               prune: bool = True) -> Decision:
    if player not in (0, 1):
        raise ValueError(f"player must be 0 or 1, got {player!r}")
    clock = clock or budget.make_clock()
    clock.start()
    movegen = movegen or MoveGenConfig()
    search = _Search(player, budget, evaluate, clock, movegen, strict, leaf_script, prune)

    if winner(state) is not None:
        return Decision(player, (), evaluate(state), 0, 0, clock.elapsed_ms())
    if not needs_decision(state, player):
        # waiting is the only order; score where it leads
        acts = forced_idle(state, player, movegen)
        if not acts:
            return Decision(player, (), evaluate(state), 0, 0, clock.elapsed_ms())
        nxt = advance_to_decision(state, {player: list(acts)}, movegen.max_wait)
        return Decision(player, acts, evaluate(nxt), 1, 1, clock.elapsed_ms())

    order = (player, 1 - player) if strict else search.movers(state)
    candidates = joint_actions(state, player, movegen)
    if rng is not None:
        rng.shuffle(candidates)

    best_a, best_v, completed, timed_out = None, -math.inf, 0, False
    for depth in range(1, budget.max_depth + 1):
        # depth 1 always completes so a legal, evaluated choice exists
        search.armed = depth > 1
        search.cut_by_depth = False
        try:
            a, v = search.root(state, order, candidates, depth)
        except _Timeout:
            timed_out = True
            break
        best_a, best_v, completed = a, v, depth
        candidates.remove(a)
        candidates.insert(0, a)
        if not search.cut_by_depth:
            break
        if clock.elapsed_ms() >= budget.deadline_ms:
            timed_out = depth < budget.max_depth
            break
    return Decision(player, tuple(best_a), best_v, completed, search.nodes,
                    clock.elapsed_ms(), timed_out)


def idabcd_decide(state: GameState, player: int, budget: SearchBudget, evaluate: Evaluator, *,
                  clock=None, rng: Optional[random.Random] = None,
                  movegen: Optional[MoveGenConfig] = None,
                  leaf_script: Optional[Script] = None) -> Decision:
    """Alpha-beta with durative actions; only players with a decision take plies.

    ``leaf_script`` switches depth-0 leaves from direct evaluation to a
    playout of that script for both sides over ``budget.playout_horizon``.
    """
    return _iterative(state, player, budget, evaluate, strict=False, clock=clock, rng=rng,
                      movegen=movegen, leaf_script=leaf_script)


def idrtminimax_decide(state: GameState, player: int, budget: SearchBudget, evaluate: Evaluator, *,
                       clock=None, rng: Optional[random.Random] = None,
                       movegen: Optional[MoveGenConfig] = None) -> Decision:
    """Iterative-deepening minimax with strict ply alternation.

    A depth interrupted by the budget is thrown away; the previous depth's
    choice is returned.
    """
    return _iterative(state, player, budget, evaluate, strict=True, clock=clock, rng=rng,
                      movegen=movegen)


def minimax_value(state: GameState, player: int, depth: int, evaluate: Evaluator, *,
                  strict: bool, movegen: Optional[MoveGenConfig] = None) -> float:
    """Root value at a fixed depth with pruning switched off (reference search)."""
    movegen = movegen or MoveGenConfig()
    search = _Search(player, SearchBudget(max_depth=depth), evaluate, _NullClock(), movegen,
                     strict, None, prune=False)
    order = (player, 1 - player) if strict else search.movers(state)
    _, v = search.root(state, order, joint_actions(state, player, movegen), depth)
    return v


class _NullClock:
    def start(self):
        pass

    def tick(self, n: int = 1):
        pass

    def elapsed_ms(self) -> float:
        return 0.0
