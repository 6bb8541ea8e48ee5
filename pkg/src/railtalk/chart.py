"""Pure bottom-up chart parser.

Agenda-driven: every lexical entry seeds a constituent, unknown words
become X.UNKNOWN constituents, and each completed constituent tries to
start or extend dotted rule edges. Deduplication is by (span, category,
features, frame), which together with non-empty right-hand sides
guarantees termination.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .grammar import ANY, Category, Grammar, GrammarRule, unknown_category


@dataclass(frozen=True)
class Constituent:
    start: int
    end: int
    cat: Category
    features: tuple[tuple[str, str], ...]
    frame_key: str
    score: float
    rule: str
    frame: dict

    def feature(self, name: str) -> str | None:
        for k, v in self.features:
            if k == name:
                return v
        return None


def _frame_key(frame: dict) -> str:
    return json.dumps(frame, sort_keys=True, separators=(",", ":"))


def _resolve_ref(ref: str, children: list[Constituent], tokens: list[str]):
    body = ref[1:]
    if "." in body:
        idx_s, slot = body.split(".", 1)
        child = children[int(idx_s) - 1]
        if slot == "word":
            return " ".join(tokens[child.start:child.end])
        return child.frame.get(slot)
    return dict(children[int(body) - 1].frame)


def _resolve_value(value, children, tokens):
    if isinstance(value, str) and value.startswith("$"):
        return _resolve_ref(value, children, tokens)
    if isinstance(value, list):
        out = []
        for v in value:
            got = _resolve_value(v, children, tokens)
            if got is None:
                continue
            if isinstance(got, list):
                out.extend(got)
            else:
                out.append(got)
        return out
    return value


_PATH_SLOTS = ("origin", "dest", "via", "avoid")


def _merge_path(target: dict, frame: dict) -> None:
    """Fold a role/cities PP frame (or another path frame) into target."""
    role = frame.get("role")
    if role is not None:
        cities = frame.get("cities", [])
        if role in ("via", "avoid"):
            target.setdefault(role, []).extend(cities)
        elif cities:
            target[role] = cities[0]
            if len(cities) > 1:
                target.setdefault("via", []).extend(cities[1:])
        return
    for slot in _PATH_SLOTS:
        if slot in frame:
            if slot in ("via", "avoid"):
                target.setdefault(slot, []).extend(frame[slot])
            else:
                target[slot] = frame[slot]
    for k, v in frame.items():
        if k not in _PATH_SLOTS and k != "role" and k != "cities":
            target.setdefault(k, v)


def apply_action(action: dict, children: list[Constituent], tokens: list[str]) -> dict:
    kind = action["kind"]
    if kind == "empty":
        return {}
    if kind == "child":
        return dict(children[action.get("index", 1) - 1].frame)
    if kind == "frame":
        frame: dict = {}
        if "type" in action:
            frame["type"] = action["type"]
        for slot, ref in action.get("slots", {}).items():
            got = _resolve_value(ref, children, tokens)
            if got is not None and got != []:
                frame[slot] = got
        return frame
    if kind == "merge":
        frame = {}
        for idx in action.get("indices", range(1, len(children) + 1)):
            for k, v in children[int(idx) - 1].frame.items():
                if k in ("via", "avoid") and isinstance(v, list):
                    frame.setdefault(k, []).extend(v)
                else:
                    frame[k] = v
        for k, v in action.get("set", {}).items():
            got = _resolve_value(v, children, tokens)
            if got is not None:
                frame[k] = got
        return frame
    if kind == "path":
        frame = {}
        if "type" in action:
            frame["type"] = action["type"]
        for idx in action.get("indices", range(1, len(children) + 1)):
            _merge_path(frame, children[int(idx) - 1].frame)
        for k, v in action.get("set", {}).items():
            got = _resolve_value(v, children, tokens)
            if got is not None:
                frame[k] = got
        return frame
    raise AssertionError(f"unreachable action kind {kind}")


def _lhs_features(rule: GrammarRule, children: list[Constituent]) -> tuple[tuple[str, str], ...]:
    out = []
    for k, v in rule.lhs_features:
        if v.startswith("$"):
            idx_s, feat = v[1:].split(".", 1)
            got = children[int(idx_s) - 1].feature(feat)
            if got is not None:
                out.append((k, got))
        else:
            out.append((k, v))
    return tuple(out)


@dataclass(frozen=True)
class _Edge:
    rule: GrammarRule
    dot: int
    start: int
    end: int
    children: tuple[Constituent, ...]


def parse_chart(tokens: list[str] | tuple[str, ...], grammar: Grammar) -> list[Constituent]:
    """All derivable constituents over every span of tokens."""
    tokens = list(tokens)
    constituents: list[Constituent] = []
    seen: set[tuple] = set()
    passive_by_start: dict[int, list[Constituent]] = {}
    edges_by_end: dict[int, list[_Edge]] = {}
    edge_seen: set[tuple] = set()
    agenda: deque = deque()

    def add_constituent(c: Constituent):
        key = (c.start, c.end, c.cat, c.features, c.frame_key)
        if key in seen:
            return
        seen.add(key)
        constituents.append(c)
        passive_by_start.setdefault(c.start, []).append(c)
        agenda.append(c)

    def complete(edge: _Edge):
        rule = edge.rule
        children = list(edge.children)
        frame = apply_action(rule.action, children, tokens)
        add_constituent(Constituent(
            start=edge.start,
            end=edge.end,
            cat=rule.lhs,
            features=_lhs_features(rule, children),
            frame_key=_frame_key(frame),
            score=rule.weight + sum(ch.score for ch in children),
            rule=rule.name,
            frame=frame,
        ))

    def add_edge(edge: _Edge):
        if edge.dot == len(edge.rule.rhs):
            complete(edge)
            return
        dedup = (edge.rule.name, edge.dot, edge.start, edge.end,
                 tuple((c.cat, c.start, c.end, c.features, c.frame_key) for c in edge.children))
        if dedup in edge_seen:
            return
        edge_seen.add(dedup)
        edges_by_end.setdefault(edge.end, []).append(edge)
        want = edge.rule.rhs[edge.dot]
        for c in list(passive_by_start.get(edge.end, ())):
            if want.matches(c.cat, dict(c.features)):
                add_edge(_Edge(edge.rule, edge.dot + 1, edge.start, c.end,
                               edge.children + (c,)))

    rules_by_first: dict[tuple[str, str], list[GrammarRule]] = {}
    for rule in grammar.rules:
        first = rule.rhs[0]
        rules_by_first.setdefault((first.syn, first.sem), []).append(rule)

    def first_rules(cat: Category):
        for key in ((cat.syn, cat.sem), (cat.syn, ANY), (ANY, cat.sem), (ANY, ANY)):
            yield from rules_by_first.get(key, ())

    for i, tok in enumerate(tokens):
        entries = grammar.entries_for(tok)
        if entries:
            for e in entries:
                frame = dict(e.frame)
                add_constituent(Constituent(i, i + 1, e.cat, e.features,
                                            _frame_key(frame), 1.0, "lex", frame))
        else:
            frame = {"word": tok}
            add_constituent(Constituent(i, i + 1, unknown_category(), (),
                                        _frame_key(frame), 0.5, "lex-unknown", frame))

    while agenda:
        c = agenda.popleft()
        feats = dict(c.features)
        for rule in first_rules(c.cat):
            if rule.rhs[0].matches(c.cat, feats):
                add_edge(_Edge(rule, 1, c.start, c.end, (c,)))
        for edge in list(edges_by_end.get(c.start, ())):
            want = edge.rule.rhs[edge.dot]
            if want.matches(c.cat, feats):
                add_edge(_Edge(edge.rule, edge.dot + 1, edge.start, c.end,
                               edge.children + (c,)))
    return constituents
