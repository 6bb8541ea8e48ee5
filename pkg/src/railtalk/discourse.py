"""Discourse management: segment stack, reference resolution, verbal rules.

Each dialogue segment frame records the motivating goal, the object
focus with its history list, and the problem-solving status. Prioritized
verbal rules (a data file) map incoming speech acts to handlers; the
lowest-priority rule is a catch-all, so every turn gets some response.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from importlib import resources

from .acts import ActSequence, SpeechAct
from .psolver import GoalFrame, ProblemSolver, RuleFormatError
from .responses import ResponseAct
from .world import WorldState

OPEN = "OPEN"
ACHIEVED = "ACHIEVED"
FAILED = "FAILED"
AWAITING_CLARIFICATION = "AWAITING-CLARIFICATION"


@dataclass
class DiscourseFrame:
    kind: str                      # ROOT | MOVE_GOAL | CHOOSE_ROUTE | CHOOSE_DEST
    goal: GoalFrame | None = None
    focus: str | None = None
    history: list[str] = field(default_factory=list)
    ps_status: str = OPEN

    def touch(self, entity_id: str) -> None:
        if entity_id in self.history:
            self.history.remove(entity_id)
        self.history.insert(0, entity_id)
        self.focus = entity_id


@dataclass
class DiscourseState:
    stack: list[DiscourseFrame] = field(default_factory=list)
    last_system_act: ResponseAct | None = None
    pending_clarification: dict | None = None
    complete: bool = False

    def focused_goal(self) -> GoalFrame | None:
        for frame in reversed(self.stack):
            if frame.goal is not None:
                return frame.goal
        return None

    def focused_engine(self) -> str | None:
        for frame in reversed(self.stack):
            if frame.focus is not None:
                return frame.focus
        return None

    def recent_entities(self) -> list[str]:
        out: list[str] = []
        for frame in reversed(self.stack):
            for ent in frame.history:
                if ent not in out:
                    out.append(ent)
        return out


def push_segment(state: DiscourseState, frame: DiscourseFrame) -> DiscourseState:
    state.stack.append(frame)
    return state


def pop_segment(state: DiscourseState) -> DiscourseFrame:
    if not state.stack:
        raise IndexError("discourse stack is empty")
    frame = state.stack.pop()
    if frame.kind in ("CHOOSE_ROUTE", "CHOOSE_DEST"):
        state.pending_clarification = None
    return frame


# ---------------------------------------------------------------------------
# Verbal rules

@dataclass(frozen=True)
class VerbalRule:
    name: str
    priority: int
    pattern: dict
    action: str


_ACTIONS = ("accept_proposal", "reject_proposal", "ignore_social",
            "ignore_vacuous", "solver", "catch_all")

_PATTERN_KEYS = ("act", "content_type", "content", "stack", "pending_proposal")


def load_verbal_rules(path: str | None = None) -> tuple[VerbalRule, ...]:
    if path is None:
        text = resources.files("railtalk.data").joinpath("verbal_rules.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    doc = json.loads(text)
    if doc.get("version") != 1:
        raise RuleFormatError("unsupported verbal_rules version")
    rules = []
    priorities = set()
    for item in doc["rules"]:
        if item["action"] not in _ACTIONS:
            raise RuleFormatError(f"rule {item['name']}: unknown action {item['action']!r}")
        for key in item.get("pattern", {}):
            if key not in _PATTERN_KEYS:
                raise RuleFormatError(f"rule {item['name']}: unknown pattern key {key!r}")
        prio = int(item["priority"])
        if prio in priorities:
            raise RuleFormatError(f"duplicate priority {prio}")
        priorities.add(prio)
        rules.append(VerbalRule(item["name"], prio, dict(item.get("pattern", {})), item["action"]))
    rules.sort(key=lambda r: r.priority)
    if not rules or rules[-1].pattern or rules[-1].action != "catch_all":
        raise RuleFormatError("last rule must be an unconditioned catch-all")
    return tuple(rules)


def _matches(rule: VerbalRule, act: SpeechAct, state: DiscourseState) -> bool:
    p = rule.pattern
    if "act" in p and act.act_type not in p["act"]:
        return False
    if "content_type" in p and act.content.get("type") not in p["content_type"]:
        return False
    if "content" in p:
        empty = not act.content
        if p["content"] == "empty" and not empty:
            return False
        if p["content"] == "nonempty" and empty:
            return False
    if "stack" in p:
        if p["stack"] == "empty" and state.stack:
            return False
        if p["stack"] == "nonempty" and not state.stack:
            return False
    if "pending_proposal" in p:
        goal = state.focused_goal()
        pending = goal is not None and goal.state in ("proposed", "partial")
        if p["pending_proposal"] != pending:
            return False
    return True


# ---------------------------------------------------------------------------
# Reference resolution

def _resolve_engine_ref(ref: dict, state: DiscourseState, world: WorldState) -> str | None:
    at = ref.get("at")
    if at is not None:
        cid = world.city_id(at)
        for e in sorted(world.engines.values(), key=lambda e: e.id):
            if e.current_city == cid:
                return e.id
        for e in sorted(world.engines.values(), key=lambda e: e.id):
            if e.origin() == cid or e.home_city == cid:
                return e.id
        return None
    sel = ref.get("sel")
    if sel == "last":
        unrouted = [e for e in sorted(world.engines.values(), key=lambda e: e.id)
                    if e.route is None]
        if len(unrouted) == 1:
            return unrouted[0].id
        for ent in state.recent_entities():
            if ent in world.engines:
                return ent
        return unrouted[0].id if unrouted else None
    if sel == "current":
        return state.focused_engine()
    if sel in ("first", "other"):
        engines = sorted(world.engines, key=str)
        if sel == "first":
            return engines[0]
        focused = state.focused_engine()
        others = [e for e in engines if e != focused]
        return others[0] if others else None
    return None  # bare reference: defer to the focused goal


def resolve_references(act: SpeechAct, state: DiscourseState,
                       world: WorldState) -> SpeechAct:
    """Ground noun-phrase frames to entity ids; maybe refine the force.

    Force refinement is upward only: a contentful TELL that answers a
    pending route clarification becomes a SUGGEST. Acts are never merged
    and unresolvable references annotate rather than reject the act.
    """
    content = dict(act.content)
    act_type = act.act_type
    if content.get("type") == "MOVE":
        for slot in ("origin", "dest"):
            if slot in content:
                content[slot] = world.city_id(content[slot])
        for slot in ("via", "avoid"):
            if slot in content:
                content[slot] = [world.city_id(c) for c in content[slot]]
        ref = content.get("engine")
        if isinstance(ref, dict):
            eid = _resolve_engine_ref(ref, state, world)
            if eid is not None:
                content["engine_id"] = eid
            elif ref.get("at") or ref.get("sel"):
                content["unresolved"] = True
        if (act_type == "TELL"
                and state.pending_clarification is not None
                and any(k in content for k in ("origin", "dest", "via", "avoid"))):
            act_type = "SUGGEST"
    elif content.get("type") in ("CLEAR", "REDO"):
        route = content.get("route")
        if isinstance(route, dict) and route.get("owner"):
            content["owner"] = world.city_id(route["owner"])
    return SpeechAct(act_type, content, act.start, act.end, act.confidence, act.score)


# ---------------------------------------------------------------------------
# Interpretation

_ROUTE_RESULTS = ("PROPOSE_ROUTE", "PARTIAL_ROUTE", "CORRECTED_ROUTE")


class DiscourseManager:
    def __init__(self, world: WorldState, rng: random.Random,
                 verbal_rules: tuple[VerbalRule, ...] | None = None,
                 ps_rules=None):
        self.world = world
        self.rng = rng
        self.rules = verbal_rules or load_verbal_rules()
        self.solver = ProblemSolver(world, rng, ps_rules)
        self.state = DiscourseState()

    def interpret(self, acts: ActSequence) -> list[ResponseAct]:
        """Apply the first matching rule per act; always answer something."""
        state = self.state
        responses: list[ResponseAct] = []
        social = False
        substantive = False
        for act in acts.acts:
            act = resolve_references(act, state, self.world)
            rule = next(r for r in self.rules if _matches(r, act, state))
            if rule.action == "accept_proposal":
                self._accept()
                substantive = True
            elif rule.action == "reject_proposal":
                responses.extend(self._reject())
                substantive = True
            elif rule.action == "ignore_social":
                social = True
            elif rule.action == "ignore_vacuous":
                pass
            elif rule.action == "solver":
                responses.extend(self._run_solver(act))
                substantive = True
            else:  # catch_all
                pass
        responses = self._cleanup(responses)
        if not responses:
            if substantive or social:
                responses = [ResponseAct("ACK", {})]
            else:
                responses = [ResponseAct("PARDON", {})]
        state.last_system_act = responses[-1]
        return responses

    # -- handlers ------------------------------------------------------------

    def _accept(self) -> None:
        state = self.state
        goal = state.focused_goal()
        if goal is None:
            return
        if goal.state == "proposed":
            goal.state = "confirmed"
            for frame in reversed(state.stack):
                if frame.goal is goal:
                    frame.ps_status = ACHIEVED
                    break
            while state.stack and state.stack[-1].kind in ("CHOOSE_ROUTE", "CHOOSE_DEST"):
                pop_segment(state)

    def _reject(self) -> list[ResponseAct]:
        state = self.state
        goal = state.focused_goal()
        if goal is None:
            return []
        self.world.clear_route(goal.engine_id)
        goal.state = "open"
        for frame in reversed(state.stack):
            if frame.goal is goal:
                frame.ps_status = OPEN
                break
        engine = self.world.engines[goal.engine_id]
        if goal.dest is None:
            return [ResponseAct("CLARIFY_DEST", {"city": engine.current_city})]
        return [ResponseAct("CLARIFY_ROUTE",
                            {"origin": engine.current_city, "dest": goal.dest})]

    def _run_solver(self, act: SpeechAct) -> list[ResponseAct]:
        state = self.state
        goal = state.focused_goal()
        responses, new_goal, _rule = self.solver.incorporate(act.content, goal)
        cleared = [r.payload["engine_id"] for r in responses if r.kind == "CLEARED"]
        if cleared:
            state.stack = [f for f in state.stack
                           if f.goal is None or f.goal.engine_id not in cleared]
            while state.stack and state.stack[-1].kind in ("CHOOSE_ROUTE", "CHOOSE_DEST"):
                pop_segment(state)
        if new_goal is not None and new_goal is not goal:
            frame = DiscourseFrame("MOVE_GOAL", goal=new_goal)
            frame.touch(new_goal.engine_id)
            push_segment(state, frame)
        for r in responses:
            if r.kind == "CLARIFY_ROUTE":
                state.pending_clarification = dict(r.payload)
                push_segment(state, DiscourseFrame(
                    "CHOOSE_ROUTE", ps_status=AWAITING_CLARIFICATION))
            elif r.kind == "CLARIFY_DEST":
                state.pending_clarification = dict(r.payload)
                push_segment(state, DiscourseFrame(
                    "CHOOSE_DEST", ps_status=AWAITING_CLARIFICATION))
            elif r.kind in _ROUTE_RESULTS:
                while state.stack and state.stack[-1].kind in ("CHOOSE_ROUTE", "CHOOSE_DEST"):
                    pop_segment(state)
            elif r.kind == "DONE_CLOSE":
                state.complete = True
        if new_goal is not None:
            for frame in reversed(state.stack):
                if frame.goal is new_goal:
                    frame.ps_status = {
                        "confirmed": ACHIEVED,
                        "proposed": OPEN,
                        "partial": OPEN,
                        "open": OPEN,
                    }[new_goal.state]
                    break
        return responses

    def _cleanup(self, responses: list[ResponseAct]) -> list[ResponseAct]:
        """A later route result supersedes an earlier ask from the same turn."""
        if any(r.kind in _ROUTE_RESULTS for r in responses):
            responses = [r for r in responses
                         if r.kind not in ("CLARIFY_ROUTE", "CLARIFY_DEST", "PARDON")]
        return responses
