"""Word-bigram back-off language model.

Absolute discounting: a fixed discount D is subtracted from every seen
bigram count, and the freed mass is redistributed over unseen followers
through the unigram distribution, scaled by a per-history back-off weight
chosen so each row sums to one. Good-Turing is unstable at desk-scale
counts, which is why the discount is a constant.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .textnorm import Utterance

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

DEFAULT_DISCOUNT = 0.5


@dataclass
class BigramLM:
    discount: float
    unigram_counts: dict[str, int]
    bigram_counts: dict[tuple[str, str], int]
    uni_logp: dict[str, float]
    bi_logp: dict[tuple[str, str], float]
    backoff_logw: dict[str, float]
    vocab: frozenset[str]
    _encoded: tuple | None = field(default=None, repr=False, compare=False)

    def _map(self, word: str) -> str:
        return word if word in self.vocab or word == BOS else UNK

    def logprob(self, word: str, history: str) -> float:
        """log P(word | history); unknown words map to the UNK marker."""
        w = self._map(word)
        h = self._map(history)
        got = self.bi_logp.get((h, w))
        if got is not None:
            return got
        return self.backoff_logw.get(h, 0.0) + self.uni_logp[w]

    def sequence_logprob(self, tokens: list[str] | tuple[str, ...]) -> float:
        score = 0.0
        hist = BOS
        for t in tokens:
            score += self.logprob(t, hist)
            hist = t
        return score + self.logprob(EOS, hist)

    def prob_row(self, history: str) -> dict[str, float]:
        """P(w|history) for every predictable word (vocab incl. EOS/UNK)."""
        return {w: math.exp(self.logprob(w, history)) for w in self.vocab}

    def encoded(self, as_numpy: bool = False):
        """CSR tables over sorted vocab ids, for the decode kernels.

        Returns (word2id, row_start, follower, logp, backoff, uni,
        bos_id, eos_id). Unknown histories keep back-off weight 0.0
        (pure unigram), matching logprob(). Both list and numpy forms
        are cached; the compiled kernel wants arrays, the pure one
        wants lists.
        """
        if self._encoded is None:
            words = sorted(self.vocab | {BOS})
            word2id = {w: i for i, w in enumerate(words)}
            uni = [self.uni_logp.get(w, -math.inf) for w in words]
            backoff = [self.backoff_logw.get(w, 0.0) for w in words]
            rows: list[list[tuple[int, float]]] = [[] for _ in words]
            for (h, w), lp in self.bi_logp.items():
                rows[word2id[h]].append((word2id[w], lp))
            row_start = [0]
            follower: list[int] = []
            logp: list[float] = []
            for row in rows:
                row.sort()
                for wid, lp in row:
                    follower.append(wid)
                    logp.append(lp)
                row_start.append(len(follower))
            import numpy as np

            lists = (word2id, row_start, follower, logp, backoff, uni,
                     word2id[BOS], word2id[EOS])
            arrays = (
                word2id,
                np.asarray(row_start, dtype=np.int64),
                np.asarray(follower, dtype=np.int64),
                np.asarray(logp, dtype=np.float64),
                np.asarray(backoff, dtype=np.float64),
                np.asarray(uni, dtype=np.float64),
                word2id[BOS],
                word2id[EOS],
            )
            self._encoded = (lists, arrays)
        return self._encoded[1 if as_numpy else 0]

    def lm_id(self, word: str) -> int:
        word2id = self.encoded()[0]
        return word2id[self._map(word)]


def train_lm(corpus: list[Utterance], discount: float = DEFAULT_DISCOUNT) -> BigramLM:
    """Tabulate counts with per-utterance boundary markers and close the model.

    Every utterance contributes <s> w1 .. wn </s>; the unigram table
    counts emitted tokens (words and </s>, not <s>). The vocabulary is
    the seen words plus EOS and UNK; UNK gets its mass from add-one
    smoothing of the unigram distribution.
    """
    if not corpus:
        raise ValueError("cannot train a language model on an empty corpus")
    if not 0.0 < discount < 1.0:
        raise ValueError("discount must be in (0, 1)")
    uni: Counter[str] = Counter()
    bi: Counter[tuple[str, str]] = Counter()
    for u in corpus:
        hist = BOS
        for t in u.tokens:
            uni[t] += 1
            bi[(hist, t)] += 1
            hist = t
        uni[EOS] += 1
        bi[(hist, EOS)] += 1

    vocab = frozenset(uni) | {EOS, UNK}
    n_tokens = sum(uni.values())
    v = len(vocab)
    uni_logp = {w: math.log((uni.get(w, 0) + 1) / (n_tokens + v)) for w in vocab}

    hist_total: Counter[str] = Counter()
    followers: dict[str, list[str]] = {}
    for (h, w), c in bi.items():
        hist_total[h] += c
        followers.setdefault(h, []).append(w)

    bi_logp: dict[tuple[str, str], float] = {}
    backoff_logw: dict[str, float] = {}
    for h, total in hist_total.items():
        seen = followers[h]
        freed = discount * len(seen) / total
        seen_uni_mass = sum(math.exp(uni_logp[w]) for w in seen)
        backoff_logw[h] = math.log(freed) - math.log(1.0 - seen_uni_mass)
        for w in seen:
            bi_logp[(h, w)] = math.log((bi[(h, w)] - discount) / total)

    return BigramLM(
        discount=discount,
        unigram_counts=dict(uni),
        bigram_counts=dict(bi),
        uni_logp=uni_logp,
        bi_logp=bi_logp,
        backoff_logw=backoff_logw,
        vocab=vocab,
    )
