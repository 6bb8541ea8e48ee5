"""Most-likely-source decoding of recognizer output.

correct() maximizes channel log-prob plus LM log-prob over source
sequences in which each source word emits one observed word or, via
fertility, two consecutive observed words. Exact ties prefer the shorter
source sequence, then the lexicographically smaller one.

exhaustive_correct() is the test oracle: plain recursive enumeration of
every segmentation and source assignment, no shared search code.
"""

from __future__ import annotations

from .channel import ChannelModel
from .lm import BOS, EOS, BigramLM
from . import kernels

DEFAULT_BEAM = 64

_ORACLE_MAX_VOCAB = 10
_ORACLE_MAX_LEN = 6


def correct(
    cm: ChannelModel,
    lm: BigramLM,
    observed: list[str] | tuple[str, ...],
    beam_width: int | None = DEFAULT_BEAM,
) -> tuple[list[str], float]:
    """Viterbi beam decode; beam_width=None means exact (unbounded)."""
    if beam_width is not None and beam_width < 1:
        raise ValueError("beam_width must be >= 1")
    if not observed:
        return [], 0.0
    local_words: set[str] = set()
    raw: list[tuple[int, str, int, float]] = []  # (pos, src, span, chan_lp)
    for i, o in enumerate(observed):
        for s, lp in cm.candidates(o):
            raw.append((i, s, 1, lp))
            local_words.add(s)
        if i + 1 < len(observed):
            for s, lp in cm.pair_candidates(observed[i], observed[i + 1]):
                raw.append((i, s, 2, lp))
                local_words.add(s)
    ordered = sorted(local_words)
    local_id = {w: k for k, w in enumerate(ordered)}
    (_w2i, row_start, follower, logp, backoff, uni, bos_id, eos_id) = lm.encoded(
        as_numpy=kernels.PREFERS_NUMPY)
    cand_pos = [c[0] for c in raw]
    cand_src = [local_id[c[1]] for c in raw]
    cand_lm = [lm.lm_id(c[1]) for c in raw]
    cand_span = [c[2] for c in raw]
    cand_chan = [c[3] for c in raw]
    path, score = kernels.decode_lattice(
        len(observed), cand_pos, cand_src, cand_lm, cand_span, cand_chan,
        row_start, follower, logp, backoff, uni, bos_id, eos_id,
        0 if beam_width is None else beam_width,
    )
    return [ordered[k] for k in path], score


def exhaustive_correct(
    cm: ChannelModel,
    lm: BigramLM,
    observed: list[str] | tuple[str, ...],
) -> tuple[list[str], float]:
    """Exact argmax by full enumeration; same scoring as correct().

    Refuses inputs beyond a small size bound: the search is exponential
    on purpose, it exists to check the decoder.
    """
    sources = sorted(cm.sources() | set(observed))
    if len(sources) > _ORACLE_MAX_VOCAB:
        raise ValueError(f"oracle limited to {_ORACLE_MAX_VOCAB} source words, got {len(sources)}")
    if len(observed) > _ORACLE_MAX_LEN:
        raise ValueError(f"oracle limited to {_ORACLE_MAX_LEN} observed tokens")
    if not observed:
        return [], 0.0
    obs = tuple(observed)
    best: list[tuple[float, tuple[str, ...]]] = []

    def consider(score: float, path: tuple[str, ...]) -> None:
        if not best:
            best.append((score, path))
            return
        s0, p0 = best[0]
        if score > s0 or (score == s0 and (len(path), path) < (len(p0), p0)):
            best[0] = (score, path)

    def walk(pos: int, hist: str, score: float, path: tuple[str, ...]) -> None:
        if pos == len(obs):
            consider(score + lm.logprob(EOS, hist), path)
            return
        for span in (1, 2):
            if pos + span > len(obs):
                break
            seg = obs[pos:pos + span]
            for s in sources:
                clp = cm.logprob(s, seg)
                if clp is None:
                    continue
                walk(pos + span, s, score + clp + lm.logprob(s, hist), path + (s,))

    walk(0, BOS, 0.0, ())
    if not best:
        raise ValueError("no source sequence covers the input")
    return list(best[0][1]), best[0][0]
