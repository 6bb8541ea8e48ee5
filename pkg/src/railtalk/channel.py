"""Word confusion channel: P(observed | intended), with 1-to-2 fertility.

Training tabulates confusions from aligned ref/hyp pairs. A secondary
realignment pass re-runs the edit DP with an extra one-ref-to-two-hyp op
priced between a substitution (1) and a substitution plus insertion (2),
so a source word aligned against two observed tokens is counted as a
fertility emission instead of polluting the substitution table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import kernels
from .align import AlignedPair

# Between SUB (would hide the split) and SUB+INS (would never split).
_SPLIT_COST = 1.01

DEFAULT_SMOOTHING = 0.5
DEFAULT_SELF_FLOOR = 0.2
DEFAULT_UNK_PENALTY = math.log(0.01)


@dataclass
class ChannelModel:
    """sub[s][o] = P(o|s); fertility[s][(o1,o2)] = P(o1 o2|s).

    For each trained source word the outgoing mass (substitutions plus
    fertility pairs) sums to one, with at least self_floor on s -> s.
    Untrained words pass through unchanged at the fixed unk_penalty
    log-probability.
    """

    sub: dict[str, dict[str, float]]
    fertility: dict[str, dict[tuple[str, str], float]]
    self_floor: float = DEFAULT_SELF_FLOOR
    unk_penalty: float = DEFAULT_UNK_PENALTY
    _index: tuple | None = field(default=None, repr=False, compare=False)

    def sources(self) -> set[str]:
        return set(self.sub) | set(self.fertility)

    def _indexes(self):
        """(by_obs, by_pair): observed token(s) -> [(source, logP)]."""
        if self._index is None:
            by_obs: dict[str, list[tuple[str, float]]] = {}
            by_pair: dict[tuple[str, str], list[tuple[str, float]]] = {}
            for s, dist in self.sub.items():
                for o, p in dist.items():
                    by_obs.setdefault(o, []).append((s, math.log(p)))
            for s, dist in self.fertility.items():
                for pair, p in dist.items():
                    by_pair.setdefault(pair, []).append((s, math.log(p)))
            for lst in by_obs.values():
                lst.sort()
            for lst in by_pair.values():
                lst.sort()
            self._index = (by_obs, by_pair)
        return self._index

    def logprob(self, source: str, observed: tuple[str, ...]) -> float | None:
        """log P(observed segment | source), None when impossible."""
        if len(observed) == 1:
            o = observed[0]
            dist = self.sub.get(source)
            if dist is not None and o in dist:
                return math.log(dist[o])
            if source == o:
                return self.unk_penalty
            return None
        if len(observed) == 2:
            dist = self.fertility.get(source)
            if dist is not None and tuple(observed) in dist:
                return math.log(dist[tuple(observed)])
        return None

    def candidates(self, observed: str) -> list[tuple[str, float]]:
        """Sources that can emit the observed word, plus its passthrough."""
        by_obs, _ = self._indexes()
        cands = list(by_obs.get(observed, ()))
        if not any(s == observed for s, _ in cands):
            cands.append((observed, self.unk_penalty))
            cands.sort()
        return cands

    def pair_candidates(self, o1: str, o2: str) -> list[tuple[str, float]]:
        _, by_pair = self._indexes()
        return by_pair.get((o1, o2), [])


def realign_with_splits(ref: tuple[str, ...], hyp: tuple[str, ...]):
    """Edit script over (ref, hyp) allowing 1-to-2 SPLIT ops.

    Yields (op_code, source_token_or_None, observed_tokens_tuple).
    """
    table: dict[str, int] = {}
    for t in ref:
        table.setdefault(t, len(table))
    for t in hyp:
        table.setdefault(t, len(table))
    codes = kernels.align_ops([table[t] for t in ref], [table[t] for t in hyp],
                              split_cost=_SPLIT_COST)
    i = j = 0
    out = []
    for code in codes:
        if code in (kernels.MATCH, kernels.SUB):
            out.append((code, ref[i], (hyp[j],)))
            i += 1
            j += 1
        elif code == kernels.SPLIT:
            out.append((code, ref[i], (hyp[j], hyp[j + 1])))
            i += 1
            j += 2
        elif code == kernels.DEL:
            out.append((code, ref[i], ()))
            i += 1
        else:
            out.append((code, None, (hyp[j],)))
            j += 1
    return out


def train_channel(
    pairs: list[AlignedPair],
    smoothing: float = DEFAULT_SMOOTHING,
    self_floor: float = DEFAULT_SELF_FLOOR,
    unk_penalty: float = DEFAULT_UNK_PENALTY,
) -> ChannelModel:
    """Tabulate confusions from aligned pairs and normalize per source word.

    Add-smoothing applies over each source's seen targets plus the
    identity; deletions and insertions are out of the channel's scope
    and are skipped.
    """
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")
    sub_counts: dict[str, dict[str, float]] = {}
    fert_counts: dict[str, dict[tuple[str, str], float]] = {}
    for pair in pairs:
        for code, src, obs in realign_with_splits(pair.ref, pair.hyp):
            if code in (kernels.MATCH, kernels.SUB):
                sub_counts.setdefault(src, {}).setdefault(obs[0], 0.0)
                sub_counts[src][obs[0]] += 1.0
            elif code == kernels.SPLIT:
                fert_counts.setdefault(src, {}).setdefault(obs, 0.0)
                fert_counts[src][obs] += 1.0

    sub: dict[str, dict[str, float]] = {}
    fertility: dict[str, dict[tuple[str, str], float]] = {}
    for s in sorted(set(sub_counts) | set(fert_counts)):
        s_counts = dict(sub_counts.get(s, {}))
        s_counts.setdefault(s, 0.0)
        f_counts = fert_counts.get(s, {})
        weights = {o: c + smoothing for o, c in s_counts.items()}
        fweights = {p: c + smoothing for p, c in f_counts.items()}
        total = sum(weights.values()) + sum(fweights.values())
        probs = {o: w / total for o, w in weights.items()}
        fprobs = {p: w / total for p, w in fweights.items()}
        if probs[s] < self_floor:
            scale = (1.0 - self_floor) / (1.0 - probs[s])
            probs = {o: (self_floor if o == s else p * scale) for o, p in probs.items()}
            fprobs = {p: w * scale for p, w in fprobs.items()}
        sub[s] = probs
        if fprobs:
            fertility[s] = fprobs
    return ChannelModel(sub, fertility, self_floor, unk_penalty)
