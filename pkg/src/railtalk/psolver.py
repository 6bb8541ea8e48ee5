"""Problem solver: prioritized plan-repair rules over grounded move content.

Exactly one branch fires per content frame, tried in priority order:
extend the focused plan, shift focus to another engine, reinterpret as a
correction of the focused plan, open a new goal, or ask. The rule ladder
is data (ps_rules.json) so tests can exercise reordered sets.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources

from .planner import PlanFailure, plan_route
from .responses import ResponseAct
from .world import Route, WorldState


class RuleFormatError(ValueError):
    pass


@dataclass(frozen=True)
class PsRule:
    name: str
    priority: int
    pattern: dict
    action: str


_PS_ACTIONS = ("extend", "focus_shift", "correct", "new_goal", "clarify",
               "done_check", "clear_route", "redo_route")

_PATTERN_KEYS = ("content", "goal_open", "extendable", "other_engine_at_origin",
                 "focused_originated_at_origin", "engine_resolved")


def load_ps_rules(path: str | None = None) -> tuple[PsRule, ...]:
    if path is None:
        text = resources.files("railtalk.data").joinpath("ps_rules.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    doc = json.loads(text)
    if doc.get("version") != 1:
        raise RuleFormatError("unsupported ps_rules version")
    rules = []
    priorities = set()
    for item in doc["rules"]:
        if item["action"] not in _PS_ACTIONS:
            raise RuleFormatError(f"rule {item['name']}: unknown action {item['action']!r}")
        for key in item.get("pattern", {}):
            if key not in _PATTERN_KEYS:
                raise RuleFormatError(f"rule {item['name']}: unknown pattern key {key!r}")
        prio = int(item["priority"])
        if prio in priorities:
            raise RuleFormatError(f"duplicate priority {prio}")
        priorities.add(prio)
        rules.append(PsRule(item["name"], prio, dict(item.get("pattern", {})), item["action"]))
    rules.sort(key=lambda r: r.priority)
    if not rules or rules[-1].pattern:
        raise RuleFormatError("last (lowest-priority) rule must be a catch-all")
    return tuple(rules)


@dataclass
class GoalFrame:
    """Problem-solving view of one engine's plan."""
    engine_id: str
    origin: str
    dest: str | None
    via: list[str]
    avoid: set[str]
    state: str = "open"  # open | partial | proposed | confirmed

    def has_route(self, world: WorldState) -> bool:
        return world.engines[self.engine_id].route is not None


def _resolve_cities(world: WorldState, names) -> list[str]:
    return [world.city_id(n) for n in names or ()]


class ProblemSolver:
    def __init__(self, world: WorldState, rng: random.Random,
                 rules: tuple[PsRule, ...] | None = None):
        self.world = world
        self.rng = rng
        self.rules = rules or load_ps_rules()

    # -- pattern evaluation -------------------------------------------------

    def _facts(self, content: dict, goal: GoalFrame | None) -> dict:
        world = self.world
        origin = content.get("origin")
        engine_id = content.get("engine_id")
        facts = {
            "content": content.get("type", ""),
            "goal_open": goal is not None,
            "extendable": False,
            "other_engine_at_origin": False,
            "focused_originated_at_origin": False,
            "engine_resolved": False,
        }
        if goal is not None:
            e = world.engines[goal.engine_id]
            same_engine = engine_id in (None, goal.engine_id)
            facts["extendable"] = same_engine and (origin is None or e.current_city == origin)
            facts["focused_originated_at_origin"] = (
                origin is not None and same_engine and e.origin() == origin)
        if origin is not None:
            focused = goal.engine_id if goal else None
            others = [e for e in world.engines_at(origin) if e.id != focused]
            facts["other_engine_at_origin"] = bool(others)
        if engine_id is not None or (origin and world.engines_at(origin)):
            facts["engine_resolved"] = True
        return facts

    def _first_rule(self, facts: dict) -> PsRule:
        for rule in self.rules:
            if all(facts.get(k) == v for k, v in rule.pattern.items()):
                return rule
        raise AssertionError("catch-all rule missing")  # load_ps_rules guarantees one

    # -- entry point ---------------------------------------------------------

    def incorporate(self, content: dict, goal: GoalFrame | None):
        """Apply the first matching rule. Returns (responses, new_goal, fired_rule).

        new_goal is the goal frame the discourse layer should focus
        (possibly the one passed in, mutated), or None when the content
        closed or never opened a segment.
        """
        facts = self._facts(content, goal)
        rule = self._first_rule(facts)
        handler = getattr(self, "_do_" + rule.action)
        responses, new_goal = handler(content, goal)
        return responses, new_goal, rule

    # -- planning helpers ----------------------------------------------------

    def _plan(self, goal: GoalFrame, anchor: str):
        world = self.world
        via = [c for c in goal.via if c not in goal.avoid and c != anchor and c != goal.dest]
        assert goal.dest is not None
        return plan_route(world, anchor, goal.dest, tuple(via),
                          frozenset(goal.avoid), self.rng)

    def _assign(self, goal: GoalFrame, route: Route, keep_prefix: bool) -> Route:
        world = self.world
        engine = world.engines[goal.engine_id]
        if keep_prefix and engine.route is not None:
            path = engine.route.path + route.path[1:]
        else:
            path = route.path
        full = Route(goal.engine_id, path)
        world.assign_route(goal.engine_id, full)
        return full

    def _route_responses(self, kind: str, goal: GoalFrame, route: Route) -> list[ResponseAct]:
        world = self.world
        out = [ResponseAct(kind, {
            "engine_id": goal.engine_id,
            "path": list(route.path),
            "origin": route.path[0],
            "dest": route.path[-1],
        })]
        crossings = sorted(world.crossing_cities(route))
        if crossings:
            out.append(ResponseAct("CROSSING", {
                "city": crossings[0],
                "hours": world.cross_penalty_hours,
            }))
        return out

    def _propose(self, goal: GoalFrame, kind: str = "PROPOSE_ROUTE"):
        """Plan toward the goal from the right anchor and respond."""
        world = self.world
        engine = world.engines[goal.engine_id]
        partial = goal.state == "partial" and engine.route is not None
        anchor = engine.current_city if partial else goal.origin
        if not partial and engine.route is not None:
            world.clear_route(goal.engine_id)
            anchor = goal.origin
        if goal.dest is None:
            return [ResponseAct("CLARIFY_DEST",
                                {"city": engine.current_city})], goal
        got = self._plan(goal, anchor)
        if isinstance(got, Route):
            full = self._assign(goal, got, keep_prefix=partial)
            goal.state = "proposed"
            return self._route_responses(kind, goal, full), goal
        if got is PlanFailure.NO_PATH:
            return [ResponseAct("NO_PATH", {"origin": anchor, "dest": goal.dest})], goal
        # TOO_LONG: try covering just the via prefix, leaving the goal open
        if goal.via:
            prefix_dest = goal.via[-1]
            prefix = plan_route(world, anchor, prefix_dest, tuple(goal.via[:-1]),
                                frozenset(goal.avoid), self.rng)
            if isinstance(prefix, Route):
                full = self._assign(goal, prefix, keep_prefix=partial)
                goal.state = "partial"
                goal.via = []
                return self._route_responses("PARTIAL_ROUTE", goal, full), goal
        goal.state = "open"
        return [ResponseAct("CLARIFY_ROUTE",
                            {"origin": anchor, "dest": goal.dest})], goal

    # -- rule actions ----------------------------------------------------------

    def _do_extend(self, content: dict, goal: GoalFrame | None):
        assert goal is not None
        world = self.world
        new_via = _resolve_cities(world, content.get("via"))
        new_avoid = _resolve_cities(world, content.get("avoid"))
        new_dest = world.city_id(content["dest"]) if content.get("dest") else None
        goal_changed = new_dest is not None and new_dest != goal.dest
        no_news = not new_via and not new_avoid and not goal_changed
        if no_news:
            has_route = goal.has_route(world)
            if goal.dest is None:
                engine = world.engines[goal.engine_id]
                return [ResponseAct("CLARIFY_DEST", {"city": engine.current_city})], goal
            if has_route and goal.state in ("proposed", "confirmed", "partial"):
                return [ResponseAct("ACK", {})], goal
            if not has_route and goal.state in ("proposed", "confirmed"):
                goal.state = "open"  # route was cleared since; plan afresh
                return self._propose(goal)
            anchor = world.engines[goal.engine_id].current_city
            return [ResponseAct("CLARIFY_ROUTE",
                                {"origin": anchor, "dest": goal.dest})], goal
        goal.avoid |= set(new_avoid)
        if new_dest is not None:
            goal.dest = new_dest
        if new_via:
            if goal.state == "partial":
                goal.via = goal.via + new_via
            else:
                goal.via = new_via
        if goal_changed and goal.state != "partial":
            goal.state = "open"  # replan from origin
        return self._propose(goal)

    def _do_focus_shift(self, content: dict, goal: GoalFrame | None):
        world = self.world
        origin = content["origin"]
        focused = goal.engine_id if goal else None
        engine = next(e for e in sorted(world.engines_at(origin), key=lambda e: e.id)
                      if e.id != focused)
        return self._new_goal_for(engine.id, content)

    def _do_correct(self, content: dict, goal: GoalFrame | None):
        assert goal is not None
        world = self.world
        goal.avoid |= world.recently_congested()
        goal.avoid |= set(_resolve_cities(world, content.get("avoid")))
        new_via = _resolve_cities(world, content.get("via"))
        if new_via:
            goal.via = new_via
        if content.get("dest"):
            goal.dest = world.city_id(content["dest"])
        goal.state = "open"
        responses, goal = self._propose(goal, kind="CORRECTED_ROUTE")
        return responses, goal

    def _do_new_goal(self, content: dict, goal: GoalFrame | None):
        world = self.world
        engine_id = content.get("engine_id")
        if engine_id is None:
            candidates = world.engines_at(content["origin"])
            engine_id = sorted(candidates, key=lambda e: e.id)[0].id
        return self._new_goal_for(engine_id, content)

    def _new_goal_for(self, engine_id: str, content: dict):
        world = self.world
        engine = world.engines[engine_id]
        origin = content.get("origin") or engine.current_city
        dest = world.city_id(content["dest"]) if content.get("dest") else None
        goal = GoalFrame(
            engine_id=engine_id,
            origin=origin,
            dest=dest,
            via=_resolve_cities(world, content.get("via")),
            avoid=set(_resolve_cities(world, content.get("avoid"))),
        )
        responses, goal = self._propose(goal)
        return responses, goal

    def _do_clarify(self, content: dict, goal: GoalFrame | None):
        return [ResponseAct("PARDON", {})], goal

    def _do_done_check(self, content: dict, goal: GoalFrame | None):
        report = self.world.score_solution()
        if report.complete:
            return [ResponseAct("DONE_CLOSE", {"hours": report.total_hours})], goal
        city = report.unmet_goals[0]
        return [ResponseAct("DONE_UNMET", {"city": self.world.city_id(city)})], goal

    def _engine_for_route_ref(self, owner: str):
        world = self.world
        engines = sorted(world.engines.values(), key=lambda e: e.id)
        for e in engines:
            if e.route is not None and e.route.path[0] == owner:
                return e
        for e in engines:
            if e.home_city == owner:
                return e
        for e in engines:
            if e.current_city == owner:
                return e
        return None

    def _do_clear_route(self, content: dict, goal: GoalFrame | None):
        owner = content.get("owner")
        engine = self._engine_for_route_ref(owner) if owner else (
            self.world.engines[goal.engine_id] if goal else None)
        if engine is None or engine.route is None:
            city = owner or (engine.current_city if engine else "")
            return [ResponseAct("NO_ROUTE_TO_CLEAR", {"city": city})], None
        self.world.clear_route(engine.id)
        return [ResponseAct("CLEARED", {"engine_id": engine.id,
                                        "city": engine.current_city})], None

    def _do_redo_route(self, content: dict, goal: GoalFrame | None):
        owner = content.get("owner")
        engine = self._engine_for_route_ref(owner) if owner else None
        if engine is None or engine.route is None:
            city = owner or ""
            return [ResponseAct("NO_ROUTE_TO_CLEAR", {"city": city})], None
        old_dest = engine.route.path[-1]
        self.world.clear_route(engine.id)
        fresh = GoalFrame(engine.id, engine.current_city, old_dest, [], set())
        responses, fresh = self._propose(fresh)
        return responses, fresh
