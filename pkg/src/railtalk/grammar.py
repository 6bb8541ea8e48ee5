"""Grammar and lexicon: declarative JSON files, validated on load.

Every category carries a syntactic and a semantic symbol, both from
closed inventories declared in the file. Rule right-hand sides may
constrain child features (exact match; "*" matches any symbol). The
left-hand side may copy child features with "$i.<feature>" references.

Semantic actions build frames (slot/filler maps):
  {"kind": "frame", "type": T, "slots": {slot: ref}}   build a fresh frame
  {"kind": "child", "index": i}                        copy child i's frame
  {"kind": "merge", "indices": [..], "set": {...}}     shallow merge + extras
  {"kind": "path", "indices": [..], "set": {...}}      fold role/cities
                                                       children into an
                                                       origin/dest/via/avoid
                                                       route constraint frame
  {"kind": "empty"}                                    contentless

Refs inside slots: "$i" (child i's frame), "$i.slot", "$i.word" (covered
text); lists resolve elementwise and flatten. Anything else is literal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

ANY = "*"


class GrammarFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Category:
    syn: str
    sem: str

    def __str__(self):
        return f"{self.syn}.{self.sem}"


@dataclass(frozen=True)
class RhsItem:
    syn: str
    sem: str
    features: tuple[tuple[str, str], ...] = ()

    def matches(self, cat: Category, features: dict[str, str]) -> bool:
        if self.syn != ANY and self.syn != cat.syn:
            return False
        if self.sem != ANY and self.sem != cat.sem:
            return False
        return all(features.get(k) == v for k, v in self.features)


@dataclass(frozen=True)
class GrammarRule:
    name: str
    weight: float
    lhs: Category
    lhs_features: tuple[tuple[str, str], ...]
    rhs: tuple[RhsItem, ...]
    action: dict


@dataclass(frozen=True)
class LexEntry:
    word: str
    cat: Category
    features: tuple[tuple[str, str], ...]
    frame: dict


@dataclass
class Grammar:
    syntactic: frozenset[str]
    semantic: frozenset[str]
    features: frozenset[str]
    rules: tuple[GrammarRule, ...]
    lexicon: dict[str, tuple[LexEntry, ...]]
    act_feature: str = "act"

    def entries_for(self, word: str) -> tuple[LexEntry, ...]:
        return self.lexicon.get(word, ())


_UNKNOWN_CAT = Category("X", "UNKNOWN")


def unknown_category() -> Category:
    return _UNKNOWN_CAT


def _check_symbol(kind: str, symbol: str, inventory: frozenset[str], where: str):
    if symbol != ANY and symbol not in inventory:
        raise GrammarFormatError(f"{where}: undeclared {kind} symbol {symbol!r}")


def _freeze_features(doc: dict, declared: frozenset[str], where: str):
    out = []
    for k, v in sorted(doc.items()):
        if k not in declared:
            raise GrammarFormatError(f"{where}: undeclared feature {k!r}")
        out.append((k, str(v)))
    return tuple(out)


_ACTION_KINDS = {"frame", "child", "merge", "path", "empty"}


def _check_action(action: dict, n_rhs: int, where: str):
    kind = action.get("kind")
    if kind not in _ACTION_KINDS:
        raise GrammarFormatError(f"{where}: unknown action kind {kind!r}")
    refs: list[str] = []

    def collect(value):
        if isinstance(value, str) and value.startswith("$"):
            refs.append(value)
        elif isinstance(value, list):
            for v in value:
                collect(v)

    for v in action.get("slots", {}).values():
        collect(v)
    for v in action.get("set", {}).values():
        collect(v)
    for idx in action.get("indices", []) + [action.get("index", 1)]:
        if not 1 <= int(idx) <= n_rhs:
            raise GrammarFormatError(f"{where}: child index {idx} out of range")
    for ref in refs:
        try:
            idx = int(ref[1:].split(".", 1)[0])
        except ValueError:
            raise GrammarFormatError(f"{where}: malformed ref {ref!r}") from None
        if not 1 <= idx <= n_rhs:
            raise GrammarFormatError(f"{where}: ref {ref!r} out of range")


def parse_grammar(doc: dict, where: str = "<grammar>") -> Grammar:
    if doc.get("version") != 1:
        raise GrammarFormatError(f"{where}: unsupported grammar version {doc.get('version')!r}")
    syn = frozenset(doc.get("syntactic", ())) | {_UNKNOWN_CAT.syn}
    sem = frozenset(doc.get("semantic", ())) | {_UNKNOWN_CAT.sem}
    feats = frozenset(doc.get("features", ()))

    lexicon: dict[str, list[LexEntry]] = {}

    def add_entry(word: str, entry: dict, ctx: str):
        cat = Category(entry["syn"], entry["sem"])
        _check_symbol("syntactic", cat.syn, syn, ctx)
        _check_symbol("semantic", cat.sem, sem, ctx)
        lex = LexEntry(
            word=word,
            cat=cat,
            features=_freeze_features(entry.get("features", {}), feats, ctx),
            frame=dict(entry.get("frame", {})),
        )
        lexicon.setdefault(word, []).append(lex)

    for city in doc.get("cityLexicon", ()):
        add_entry(city, {"syn": "N", "sem": "CITY", "frame": {"city": city}},
                  f"{where}: cityLexicon {city}")
        add_entry(city + "'S", {"syn": "POSS", "sem": "CITY", "frame": {"city": city}},
                  f"{where}: cityLexicon {city}")
    for item in doc.get("lexicon", ()):
        word = item["word"]
        add_entry(word, item, f"{where}: lexicon {word}")

    rules: list[GrammarRule] = []
    names: set[str] = set()
    for item in doc.get("rules", ()):
        name = item.get("name")
        if not name or name in names:
            raise GrammarFormatError(f"{where}: missing or duplicate rule name {name!r}")
        names.add(name)
        lhs_doc = item["lhs"]
        lhs = Category(lhs_doc["syn"], lhs_doc["sem"])
        _check_symbol("syntactic", lhs.syn, syn, f"{where}: rule {name}")
        _check_symbol("semantic", lhs.sem, sem, f"{where}: rule {name}")
        rhs_items = []
        for r in item["rhs"]:
            _check_symbol("syntactic", r["syn"], syn, f"{where}: rule {name}")
            _check_symbol("semantic", r["sem"], sem, f"{where}: rule {name}")
            rhs_items.append(RhsItem(r["syn"], r["sem"],
                                     _freeze_features(r.get("features", {}), feats,
                                                      f"{where}: rule {name}")))
        if not rhs_items:
            raise GrammarFormatError(f"{where}: rule {name} has an empty rhs")
        lhs_features = []
        for k, v in sorted(lhs_doc.get("features", {}).items()):
            if k not in feats:
                raise GrammarFormatError(f"{where}: rule {name}: undeclared feature {k!r}")
            lhs_features.append((k, str(v)))
        action = item.get("action", {"kind": "empty"})
        _check_action(action, len(rhs_items), f"{where}: rule {name}")
        rules.append(GrammarRule(
            name=name,
            weight=float(item.get("weight", 1.0)),
            lhs=lhs,
            lhs_features=tuple(lhs_features),
            rhs=tuple(rhs_items),
            action=action,
        ))

    return Grammar(
        syntactic=syn,
        semantic=sem,
        features=feats,
        rules=tuple(rules),
        lexicon={w: tuple(es) for w, es in lexicon.items()},
    )


def load_grammar(path: str | None = None) -> Grammar:
    if path is None:
        text = resources.files("railtalk.data").joinpath("grammar.json").read_text("utf-8")
        where = "grammar.json"
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        where = path
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GrammarFormatError(f"{where}: invalid JSON: {exc}") from exc
    return parse_grammar(doc, where)
