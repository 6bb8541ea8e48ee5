"""Versioned structured-text serialization for trained models.

Probabilities are written with 9 significant digits; parsing and
re-saving reproduces the probability text bit-exactly (9 decimal digits
round-trip losslessly through a double).
"""

from __future__ import annotations

import math

from .channel import ChannelModel
from .lm import BigramLM

_LM_MAGIC = "railtalk-lm 1"
_CHANNEL_MAGIC = "railtalk-channel 1"


def _fmt(p: float) -> str:
    return format(p, ".9g")


class ModelFormatError(ValueError):
    pass


def save_lm(lm: BigramLM, path: str) -> None:
    lines = [_LM_MAGIC, f"discount {_fmt(lm.discount)}"]
    for w in sorted(lm.vocab):
        lines.append(f"unigram {w} {lm.unigram_counts.get(w, 0)} {_fmt(math.exp(lm.uni_logp[w]))}")
    for (h, w) in sorted(lm.bi_logp):
        lines.append(f"bigram {h} {w} {lm.bigram_counts[(h, w)]} {_fmt(math.exp(lm.bi_logp[(h, w)]))}")
    for h in sorted(lm.backoff_logw):
        lines.append(f"backoff {h} {_fmt(math.exp(lm.backoff_logw[h]))}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_lm(path: str) -> BigramLM:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != _LM_MAGIC:
        raise ModelFormatError(f"{path}: not a {_LM_MAGIC!r} file")
    discount = None
    uni_counts: dict[str, int] = {}
    bi_counts: dict[tuple[str, str], int] = {}
    uni_logp: dict[str, float] = {}
    bi_logp: dict[tuple[str, str], float] = {}
    backoff_logw: dict[str, float] = {}
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        try:
            if parts[0] == "discount":
                discount = float(parts[1])
            elif parts[0] == "unigram":
                uni_counts[parts[1]] = int(parts[2])
                uni_logp[parts[1]] = math.log(float(parts[3]))
            elif parts[0] == "bigram":
                bi_counts[(parts[1], parts[2])] = int(parts[3])
                bi_logp[(parts[1], parts[2])] = math.log(float(parts[4]))
            elif parts[0] == "backoff":
                backoff_logw[parts[1]] = math.log(float(parts[2]))
            else:
                raise ModelFormatError(f"{path}:{no}: unknown record {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ModelFormatError):
                raise
            raise ModelFormatError(f"{path}:{no}: bad record: {line!r}") from exc
    if discount is None:
        raise ModelFormatError(f"{path}: missing discount record")
    return BigramLM(
        discount=discount,
        unigram_counts=uni_counts,
        bigram_counts=bi_counts,
        uni_logp=uni_logp,
        bi_logp=bi_logp,
        backoff_logw=backoff_logw,
        vocab=frozenset(uni_logp),
    )


def save_channel(cm: ChannelModel, path: str) -> None:
    lines = [
        _CHANNEL_MAGIC,
        f"self_floor {_fmt(cm.self_floor)}",
        f"unk_penalty {_fmt(cm.unk_penalty)}",
    ]
    for s in sorted(cm.sub):
        for o in sorted(cm.sub[s]):
            lines.append(f"sub {s} {o} {_fmt(cm.sub[s][o])}")
    for s in sorted(cm.fertility):
        for (o1, o2) in sorted(cm.fertility[s]):
            lines.append(f"fert {s} {o1} {o2} {_fmt(cm.fertility[s][(o1, o2)])}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_channel(path: str) -> ChannelModel:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != _CHANNEL_MAGIC:
        raise ModelFormatError(f"{path}: not a {_CHANNEL_MAGIC!r} file")
    self_floor = unk_penalty = None
    sub: dict[str, dict[str, float]] = {}
    fert: dict[str, dict[tuple[str, str], float]] = {}
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        try:
            if parts[0] == "self_floor":
                self_floor = float(parts[1])
            elif parts[0] == "unk_penalty":
                unk_penalty = float(parts[1])
            elif parts[0] == "sub":
                sub.setdefault(parts[1], {})[parts[2]] = float(parts[3])
            elif parts[0] == "fert":
                fert.setdefault(parts[1], {})[(parts[2], parts[3])] = float(parts[4])
            else:
                raise ModelFormatError(f"{path}:{no}: unknown record {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ModelFormatError):
                raise
            raise ModelFormatError(f"{path}:{no}: bad record: {line!r}") from exc
    if self_floor is None or unk_penalty is None:
        raise ModelFormatError(f"{path}: missing self_floor/unk_penalty records")
    return ChannelModel(sub, fert, self_floor, unk_penalty)
