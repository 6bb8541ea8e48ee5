"""World state: cities, tracks, engines, routes, congestion, scoring.

Hours are computed on demand so congestion and crossings announced after
a route was assigned re-score it without touching its path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

CROSS_PENALTY_HOURS = 5


class WorldFormatError(ValueError):
    pass


@dataclass(frozen=True)
class City:
    id: str
    name: str
    x: float
    y: float


@dataclass(frozen=True)
class Route:
    engine_id: str | None
    path: tuple[str, ...]

    @property
    def hop_count(self) -> int:
        return len(self.path) - 1


@dataclass
class Engine:
    id: str
    home_city: str
    current_city: str
    route: Route | None = None

    def origin(self) -> str:
        """Where this engine's current plan started (home if unrouted)."""
        return self.route.path[0] if self.route else self.home_city


@dataclass(frozen=True)
class ScenarioEvent:
    turn: int
    kind: str
    cities: tuple[str, ...]
    extra_hours: int


@dataclass(frozen=True)
class Scenario:
    name: str
    engines: tuple[tuple[str, str], ...]  # (engine id, city name)
    goals: tuple[str, ...]                # city names
    events: tuple[ScenarioEvent, ...]


@dataclass
class ScoreReport:
    total_hours: float
    complete: bool
    unmet_goals: tuple[str, ...] = ()

    INCOMPLETE = "INCOMPLETE"

    def marker(self) -> str | None:
        return None if self.complete else self.INCOMPLETE


@dataclass
class WorldState:
    cities: dict[str, City]
    adjacency: dict[str, dict[str, float]]
    engines: dict[str, Engine]
    goals: tuple[str, ...] = ()
    congested: dict[str, tuple[float, int]] = field(default_factory=dict)  # city -> (extra, turn)
    cross_penalty_hours: float = CROSS_PENALTY_HOURS
    turn_index: int = 0
    _by_name: dict[str, str] = field(default_factory=dict)

    def city_id(self, name_or_id: str) -> str:
        if name_or_id in self.cities:
            return name_or_id
        got = self._by_name.get(name_or_id.upper())
        if got is None:
            raise KeyError(f"unknown city {name_or_id!r}")
        return got

    def city_name(self, cid: str) -> str:
        return self.cities[cid].name

    def engines_at(self, cid: str) -> list[Engine]:
        return [e for e in self.engines.values() if e.current_city == cid]

    def edge_hours(self, a: str, b: str) -> float:
        try:
            return self.adjacency[a][b]
        except KeyError:
            raise ValueError(f"no track between {a} and {b}") from None

    # -- routes ------------------------------------------------------------

    def assign_route(self, engine_id: str, route: Route) -> None:
        engine = self.engines[engine_id]
        engine.route = Route(engine_id, route.path)
        engine.current_city = route.path[-1]

    def clear_route(self, engine_id: str) -> None:
        engine = self.engines[engine_id]
        if engine.route is not None:
            engine.current_city = engine.route.path[0]
            engine.route = None

    def crossing_cities(self, route: Route) -> set[str]:
        """Cities this route shares with other engines' assigned routes."""
        mine = set(route.path)
        crossings: set[str] = set()
        for e in self.engines.values():
            if e.route is None or e.id == route.engine_id:
                continue
            crossings |= mine & set(e.route.path)
        return crossings

    def route_hours(self, route: Route) -> float:
        hours = 0.0
        for a, b in zip(route.path, route.path[1:]):
            hours += self.edge_hours(a, b)
        for cid in route.path:
            if cid in self.congested:
                hours += self.congested[cid][0]
        hours += self.cross_penalty_hours * len(self.crossing_cities(route))
        return hours

    def score_solution(self) -> ScoreReport:
        total = sum(self.route_hours(e.route) for e in self.engines.values()
                    if e.route is not None)
        reached = {e.current_city for e in self.engines.values()}
        unmet = tuple(g for g in self.goals if self.city_id(g) not in reached)
        return ScoreReport(total, complete=not unmet, unmet_goals=unmet)

    def goals_met(self) -> bool:
        return self.score_solution().complete

    # -- events ------------------------------------------------------------

    def apply_event(self, event: ScenarioEvent) -> "WorldState":
        if event.kind != "congestion":
            raise ValueError(f"unknown event kind {event.kind!r}")
        for name in event.cities:
            cid = self.city_id(name)  # raises for unknown cities
            self.congested[cid] = (float(event.extra_hours), self.turn_index)
        return self

    def recently_congested(self, window: int = 3) -> set[str]:
        return {cid for cid, (_h, turn) in self.congested.items()
                if self.turn_index - turn <= window}

    def snapshot(self) -> dict:
        return {
            "cities": sorted(self.cities),
            "engines": {
                e.id: {"home": e.home_city, "at": e.current_city,
                       "route": list(e.route.path) if e.route else None}
                for e in sorted(self.engines.values(), key=lambda e: e.id)
            },
            "congested": {c: h for c, (h, _t) in sorted(self.congested.items())},
            "goals": list(self.goals),
            "turn": self.turn_index,
        }


def _load_json(name: str, path: str | None):
    if path is None:
        text = resources.files("railtalk.data").joinpath(name).read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def load_map(path: str | None = None) -> WorldState:
    doc = _load_json("map.json", path)
    if doc.get("version") != 1:
        raise WorldFormatError(f"unsupported map version {doc.get('version')!r}")
    cities = {}
    by_name = {}
    for c in doc["cities"]:
        city = City(c["id"], c["name"], float(c["x"]), float(c["y"]))
        if city.id in cities:
            raise WorldFormatError(f"duplicate city id {city.id!r}")
        cities[city.id] = city
        by_name[city.name.upper()] = city.id
    adjacency: dict[str, dict[str, float]] = {cid: {} for cid in cities}
    for e in doc["edges"]:
        a, b, hours = e["a"], e["b"], float(e.get("hours", 1))
        if a not in cities or b not in cities:
            raise WorldFormatError(f"edge references unknown city: {a}-{b}")
        adjacency[a][b] = hours
        adjacency[b][a] = hours
    world = WorldState(cities=cities, adjacency=adjacency, engines={})
    world._by_name = by_name
    _check_connected(world)
    return world


def _check_connected(world: WorldState) -> None:
    start = next(iter(world.cities))
    seen = {start}
    frontier = [start]
    while frontier:
        cid = frontier.pop()
        for nxt in world.adjacency[cid]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    if seen != set(world.cities):
        raise WorldFormatError("track graph is not connected")


def load_scenario(name_or_path: str) -> Scenario:
    if name_or_path.endswith(".json"):
        doc = _load_json("", name_or_path)
    else:
        doc = _load_json(f"scenario_{name_or_path.replace('-', '_')}.json", None)
    if doc.get("version") != 1:
        raise WorldFormatError(f"unsupported scenario version {doc.get('version')!r}")
    engines = tuple((e["id"], e["city"]) for e in doc["engines"])
    goals = tuple(doc["goals"])
    if len(goals) > len(engines):
        raise WorldFormatError("scenario has more goal cities than engines")
    events = tuple(
        ScenarioEvent(int(ev["turn"]), ev["kind"], tuple(ev["cities"]),
                      int(ev.get("extra_hours", 5)))
        for ev in doc.get("events", ())
    )
    return Scenario(doc.get("name", name_or_path), engines, goals, events)


def world_for_scenario(scenario: Scenario, map_path: str | None = None) -> WorldState:
    world = load_map(map_path)
    for eid, city_name in scenario.engines:
        cid = world.city_id(city_name)
        world.engines[eid] = Engine(eid, cid, cid)
    for g in scenario.goals:
        world.city_id(g)  # validate
    world.goals = scenario.goals
    return world
