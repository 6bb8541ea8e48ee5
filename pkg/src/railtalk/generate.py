"""Template realization of system response acts into text plus display commands.

Templates live in templates.json keyed by response kind; each kind lists
surface variants with {slot} holes. A variant is usable when every slot
it mentions is available for the act; the seeded rng picks uniformly
among usable variants. Object descriptions (cities, engines, routes) are
rendered by per-class recipes.
"""

from __future__ import annotations

import json
import logging
import random
import re
from dataclasses import dataclass
from importlib import resources

from .responses import RESPONSE_KINDS, ResponseAct
from .world import WorldState

log = logging.getLogger(__name__)

_SLOT = re.compile(r"{(\w+)}")


class TemplateFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Template:
    kind: str
    variants: tuple[str, ...]
    error_variants: tuple[str, ...] = ()


def load_templates(path: str | None = None) -> dict[str, Template]:
    if path is None:
        text = resources.files("railtalk.data").joinpath("templates.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    doc = json.loads(text)
    if doc.get("version") != 1:
        raise TemplateFormatError("unsupported templates version")
    out: dict[str, Template] = {}
    for kind, entry in doc["templates"].items():
        if kind not in RESPONSE_KINDS:
            raise TemplateFormatError(f"template for unknown response kind {kind!r}")
        variants = tuple(entry["variants"])
        if not variants:
            raise TemplateFormatError(f"{kind}: empty variant set")
        out[kind] = Template(kind, variants, tuple(entry.get("error_variants", ())))
    missing = [k for k in RESPONSE_KINDS if k not in out]
    if missing:
        raise TemplateFormatError(f"missing templates for: {', '.join(missing)}")
    return out


def describe_city(world: WorldState, city: str) -> str:
    name = world.city_name(world.city_id(city))
    return " ".join(part.capitalize() for part in name.split("_"))


def describe_engine(world: WorldState, engine_id: str) -> str:
    e = world.engines[engine_id]
    return f"the engine at {describe_city(world, e.origin())}"


def describe_route(world: WorldState, path: list[str]) -> str:
    first = describe_city(world, path[0])
    last = describe_city(world, path[-1])
    if len(path) > 2:
        mids = " and ".join(describe_city(world, c) for c in path[1:-1])
        return f"from {first} to {last} via {mids}"
    return f"from {first} to {last}"


def _slots(act: ResponseAct, world: WorldState) -> dict[str, str]:
    p = act.payload
    slots: dict[str, str] = {}
    for key in ("origin", "dest", "city"):
        if p.get(key):
            slots[key] = describe_city(world, p[key])
    if p.get("engine_id"):
        slots["engine"] = describe_engine(world, p["engine_id"])
    if p.get("path"):
        path = p["path"]
        slots["route"] = describe_route(world, path)
        if len(path) > 2:
            slots["mids"] = " and ".join(describe_city(world, c) for c in path[1:-1])
        slots["origin"] = describe_city(world, path[0])
        slots["dest"] = describe_city(world, path[-1])
    if "hours" in p:
        hours = p["hours"]
        slots["hours"] = str(int(hours)) if float(hours).is_integer() else str(hours)
    return slots


def realize(act: ResponseAct, world: WorldState, rng: random.Random,
            templates: dict[str, Template] | None = None) -> tuple[str, list[dict]]:
    """Render one response act. Returns (text, display command dicts)."""
    templates = templates or load_templates()
    template = templates.get(act.kind)
    slots = _slots(act, world)
    if template is None:
        log.warning("no template for %s; using generic realization", act.kind)
        text = "I see."
    else:
        pool = template.error_variants if act.payload.get("error") and \
            template.error_variants else template.variants
        # a variant must have all its slots, and must name the route's
        # intermediate cities whenever there are any
        usable = [v for v in pool
                  if all(name in slots for name in _SLOT.findall(v))
                  and (("mids" in _SLOT.findall(v)) == ("mids" in slots))]
        if not usable:
            log.warning("no usable variant for %s with slots %s", act.kind, sorted(slots))
            usable = ["I see."]
        text = usable[rng.randrange(len(usable))].format(**slots)

    commands: list[dict] = []
    if act.kind in ("PROPOSE_ROUTE", "PARTIAL_ROUTE", "CORRECTED_ROUTE"):
        commands.append({"kind": "SHOW_ROUTE",
                         "engineId": act.payload["engine_id"],
                         "path": list(act.payload["path"])})
    elif act.kind == "CLEARED":
        commands.append({"kind": "CLEAR_ROUTE", "engineId": act.payload["engine_id"]})
    elif act.kind == "CONGESTION":
        commands.append({"kind": "MARK_CONGESTION",
                         "city": act.payload["city"],
                         "hours": act.payload["hours"]})
    return text, commands


def realize_all(acts: list[ResponseAct], world: WorldState, rng: random.Random,
                templates: dict[str, Template] | None = None) -> tuple[str, list[dict]]:
    templates = templates or load_templates()
    texts = []
    commands: list[dict] = []
    for act in acts:
        text, cmds = realize(act, world, rng, templates)
        texts.append(text)
        commands.extend(cmds)
    return " ".join(texts), commands
