import random
import sys

import pytest

from rtslab.game import GameState, MapSpec, UnitKind, default_unit_stats, new_game
from rtslab.game.rules import legal_actions


def make_state(width=8, height=8, units=(), piles=(), resources=(0, 0), max_cycles=10_000):
    """Hand-built state; ``units`` holds (owner, kind, (x, y)) or (owner, kind, (x, y), kw)."""
    spec = MapSpec(width, height, tuple(piles), (), name="test", starting_resources=tuple(resources))
    state = new_game(spec, max_cycles=max_cycles)
    for u in units:
        owner, kind, pos = u[:3]
        kw = u[3] if len(u) > 3 else {}
        state.add_unit(owner, kind, pos, **kw)
    return state


def random_policy(rng: random.Random):
    """Uniformly random legal order per idle unit (IDLE waits of 1-5 cycles)."""
    def policy(state: GameState, player: int):
        out = []
        for uid, acts in legal_actions(state, player).items():
            a = rng.choice(acts)
            if a.duration == 1 and a.verb.name == "IDLE":
                a = a._replace(duration=rng.randint(1, 5))
            out.append(a)
        return out
    return policy


def small_random_state(rng: random.Random, max_side=4, max_units=4):
    """A 2-4 unit mobile skirmish on a board of at most ``max_side`` x ``max_side``."""
    w, h = rng.randint(3, max_side), rng.randint(3, max_side)
    cells = [(x, y) for x in range(w) for y in range(h)]
    rng.shuffle(cells)
    n = rng.randint(2, max_units)
    kinds = [UnitKind.WORKER, UnitKind.LIGHT, UnitKind.RANGE, UnitKind.HEAVY]
    stats = default_unit_stats()
    units = []
    for i in range(n):
        kind = rng.choice(kinds)
        owner = i % 2
        hp = rng.randint(1, stats[kind].max_hp)
        units.append((owner, kind, cells[i], {"hp": hp}))
    return make_state(w, h, units, max_cycles=rng.randint(40, 200))


def mirror(state, pos):
    return (state.width - 1 - pos[0], state.height - 1 - pos[1])


def assert_mirrored(s):
    by_pos = {u.pos: u for u in s.units.values()}
    for u in s.units.values():
        m = by_pos.get(mirror(s, u.pos))
        assert m is not None, f"unit {u.id} at {u.pos} has no mirror image"
        assert (m.owner, m.kind, m.hp, m.carried, m.busy_until) == (1 - u.owner, u.kind, u.hp,
                                                                     u.carried, u.busy_until)
    assert s.player_resources[0] == s.player_resources[1]
    assert all(s.piles.get(mirror(s, p)) == a for p, a in s.piles.items())


@pytest.fixture
def m1():
    from rtslab.game import load_map
    return load_map("m1")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
