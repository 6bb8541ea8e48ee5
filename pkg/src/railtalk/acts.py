"""Speech acts: hierarchy, minimal-covering extraction, confidence.

An utterance's interpretation is the sequence of act constituents that
minimizes, lexicographically: unaccounted tokens, then act count, then
negated summed constituent scores. Skipped tokens stay out of every act;
a completely uninterpretable utterance yields one contentless TELL.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .chart import Constituent

# Single-root hierarchy: TELL marks content without identifiable force.
ACT_PARENT: dict[str, str | None] = {
    "TELL": None,
    "CONFIRM": "TELL",
    "ACKNOWLEDGE": "TELL",
    "CONFIRM/ACKNOWLEDGE": "TELL",
    "REJECT": "TELL",
    "SUGGEST": "TELL",
    "REQUEST": "TELL",
    "CHECK": "TELL",
    "QUESTION": "TELL",
}

# Acts that may carry no content at all.
_EMPTY_OK = {"TELL", "CONFIRM", "ACKNOWLEDGE", "CONFIRM/ACKNOWLEDGE", "REJECT"}

ACT_SYN = "ACT"


def is_a(act_type: str, ancestor: str) -> bool:
    node: str | None = act_type
    while node is not None:
        if node == ancestor:
            return True
        node = ACT_PARENT[node]
    return False


def specificity(act_type: str, content: dict) -> float:
    """TELL is the vaguest reading; a contentless TELL is the floor."""
    if act_type == "TELL":
        return 0.25 if not content else 0.5
    return 1.0


@dataclass(frozen=True)
class SpeechAct:
    act_type: str
    content: dict
    start: int
    end: int
    confidence: float
    score: float = 0.0

    def __post_init__(self):
        if self.act_type not in ACT_PARENT:
            raise ValueError(f"unknown act type {self.act_type!r}")
        if not self.content and self.act_type not in _EMPTY_OK:
            raise ValueError(f"{self.act_type} requires content")

    @property
    def span(self) -> tuple[int, int]:
        return self.start, self.end

    def content_key(self) -> str:
        return json.dumps(self.content, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class ActSequence:
    acts: tuple[SpeechAct, ...]
    covered: frozenset[int]
    confidence: float

    def unaccounted(self, n_tokens: int) -> list[int]:
        return [i for i in range(n_tokens) if i not in self.covered]


def acts_in_chart(chart: list[Constituent], act_feature: str = "act") -> list[SpeechAct]:
    out = []
    for c in chart:
        if c.cat.syn != ACT_SYN:
            continue
        act_type = c.feature(act_feature)
        if act_type is None or act_type not in ACT_PARENT:
            continue
        out.append(SpeechAct(
            act_type=act_type,
            content=dict(c.frame),
            start=c.start,
            end=c.end,
            confidence=specificity(act_type, c.frame),
            score=c.score,
        ))
    return out


def sequence_confidence(acts: tuple[SpeechAct, ...], covered: frozenset[int],
                        n_tokens: int) -> float:
    """Coverage fraction scaled by mean act specificity; 0 for empty input."""
    if n_tokens == 0:
        return 0.0
    coverage = len(covered) / n_tokens
    if not acts:
        return 0.0
    mean_spec = sum(specificity(a.act_type, a.content) for a in acts) / len(acts)
    return coverage * mean_spec


def _fallback(n_tokens: int) -> ActSequence:
    tell = SpeechAct("TELL", {}, 0, 0, specificity("TELL", {}))
    return ActSequence((tell,), frozenset(), 0.0)


def extract_acts(chart: list[Constituent], tokens: list[str] | tuple[str, ...],
                 act_feature: str = "act") -> ActSequence:
    """Minimal covering of tokens by disjoint acts.

    Objective, lexicographic: fewest unaccounted tokens, fewest acts,
    highest summed constituent score. Remaining ties resolve on the
    (span, type, content) descriptor list, so extraction is a pure
    function of the chart.
    """
    n = len(tokens)
    acts = acts_in_chart(chart, act_feature)
    if not acts:
        return _fallback(n)
    by_start: dict[int, list[SpeechAct]] = {}
    for a in sorted(acts, key=lambda a: (a.start, a.end, a.act_type, a.content_key())):
        by_start.setdefault(a.start, []).append(a)

    @lru_cache(maxsize=None)
    def best(i: int):
        """(unaccounted, n_acts, -score, descriptor) for tokens[i:], plus acts."""
        if i >= n:
            return (0, 0, 0.0, ()), ()
        skip_cost, skip_acts = best(i + 1)
        result = ((skip_cost[0] + 1, skip_cost[1], skip_cost[2], skip_cost[3]), skip_acts)
        for a in by_start.get(i, ()):
            tail_cost, tail_acts = best(a.end)
            desc = ((a.start, a.end, a.act_type, a.content_key()),) + tail_cost[3]
            cand = ((tail_cost[0], tail_cost[1] + 1, tail_cost[2] - a.score, desc),
                    (a,) + tail_acts)
            if cand[0] < result[0]:
                result = cand
        return result

    cost, chosen = best(0)
    if not chosen:
        return _fallback(n)
    covered = frozenset(i for a in chosen for i in range(a.start, a.end))
    conf = sequence_confidence(chosen, covered, n)
    return ActSequence(tuple(chosen), covered, conf)
