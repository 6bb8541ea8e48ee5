"""The deliberately weak route planner.

A leg is at most four hops; when several admissible acyclic paths exist
the planner picks one uniformly at random (seeded), not the shortest.
Longer connections need user-supplied intermediate cities, which is what
keeps the dialogue going.
"""

from __future__ import annotations

import enum
import random
from itertools import product

from .world import Route, WorldState

MAX_HOPS_PER_LEG = 4


class PlanFailure(enum.Enum):
    TOO_LONG = "TOO-LONG"
    NO_PATH = "NO-PATH"


def enumerate_paths(world: WorldState, src: str, dst: str,
                    avoid: frozenset[str] | set[str] = frozenset(),
                    max_hops: int = MAX_HOPS_PER_LEG) -> list[tuple[str, ...]]:
    """All acyclic paths src..dst of <= max_hops edges, canonical order."""
    if src == dst:
        return [] if src in avoid else [(src,)]
    if src in avoid or dst in avoid:
        return []
    out: list[tuple[str, ...]] = []
    path = [src]
    on_path = {src}

    def walk(city: str, hops_left: int):
        if hops_left == 0:
            return
        for nxt in sorted(world.adjacency[city]):
            if nxt in on_path or nxt in avoid:
                continue
            if nxt == dst:
                out.append(tuple(path) + (dst,))
                continue
            path.append(nxt)
            on_path.add(nxt)
            walk(nxt, hops_left - 1)
            path.pop()
            on_path.remove(nxt)

    walk(src, max_hops)
    return out


def reachable(world: WorldState, src: str, dst: str,
              avoid: frozenset[str] | set[str] = frozenset()) -> bool:
    if src == dst:
        return src not in avoid
    if src in avoid or dst in avoid:
        return False
    seen = {src}
    frontier = [src]
    while frontier:
        cid = frontier.pop()
        for nxt in world.adjacency[cid]:
            if nxt == dst:
                return True
            if nxt not in seen and nxt not in avoid:
                seen.add(nxt)
                frontier.append(nxt)
    return False


def _combine(legs: list[list[tuple[str, ...]]]) -> list[tuple[str, ...]]:
    """Concatenations of one path per leg that never revisit a city."""
    out = []
    for combo in product(*legs):
        full: list[str] = list(combo[0])
        ok = True
        for leg in combo[1:]:
            if set(leg[1:]) & set(full):
                ok = False
                break
            full.extend(leg[1:])
        if ok:
            out.append(tuple(full))
    return out


def plan_route(
    world: WorldState,
    src: str,
    dst: str,
    via: tuple[str, ...] = (),
    avoid: frozenset[str] | set[str] = frozenset(),
    rng: random.Random | None = None,
) -> Route | PlanFailure:
    """Route src -> via... -> dst, or TOO_LONG / NO_PATH.

    Each leg independently respects the hop limit; combined legs must
    not revisit cities. Via cities appear in the given order.
    """
    if len(set(via)) != len(via):
        raise ValueError("via cities must be distinct")
    waypoints = [src, *via, dst]
    legs = []
    for a, b in zip(waypoints, waypoints[1:]):
        paths = enumerate_paths(world, a, b, avoid)
        if not paths:
            return PlanFailure.TOO_LONG if reachable(world, a, b, avoid) else PlanFailure.NO_PATH
        legs.append(paths)
    combos = _combine(legs)
    if not combos:
        # every per-leg choice collides with another leg: an intermediate
        # city could still fix it, so report the soft failure
        return PlanFailure.TOO_LONG
    rng = rng or random.Random(0)
    return Route(None, combos[rng.randrange(len(combos))])
