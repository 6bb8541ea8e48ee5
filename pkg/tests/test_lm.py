import math
import random

import pytest

from railtalk.lm import BOS, EOS, UNK, BigramLM, train_lm
from railtalk.textnorm import Utterance


def u(text):
    return Utterance.from_text(text)


def test_single_utterance_closed_form():
    # corpus [A, B], discount 0.5: P(B|A) = (1 - 0.5)/1, the discounted
    # mass D * (distinct followers of A) / count(A) goes to back-off.
    lm = train_lm([u("A B")], discount=0.5)
    assert math.exp(lm.logprob("B", "A")) == pytest.approx(0.5)
    assert math.exp(lm.logprob("A", BOS)) == pytest.approx(0.5)
    assert math.exp(lm.logprob(EOS, "B")) == pytest.approx(0.5)


def test_unseen_history_backs_off_to_unigram():
    lm = train_lm([u("A B"), u("A C")])
    # ZZZ is out of vocabulary: its history row is pure unigram
    assert lm.logprob("A", "ZZZ") == lm.uni_logp["A"]
    # B was never a history-with-counts except... B is a history (B </s>)
    # pick a history with counts and an unseen follower
    expected = lm.backoff_logw["A"] + lm.uni_logp[UNK]
    assert lm.logprob("ZZZ", "A") == expected


def test_rows_normalize(fixture_lm):
    rng = random.Random(4)
    hists = rng.sample(sorted(fixture_lm.vocab), 50) + [BOS, UNK]
    for h in hists:
        total = sum(fixture_lm.prob_row(h).values())
        assert abs(total - 1.0) < 1e-9, h


def test_go_row_normalizes(fixture_lm):
    assert abs(sum(fixture_lm.prob_row("GO").values()) - 1.0) < 1e-9


def test_empty_corpus_rejected():
    with pytest.raises(ValueError):
        train_lm([])
    with pytest.raises(ValueError):
        train_lm([u("A B")], discount=1.0)


def test_sequence_logprob_composes():
    lm = train_lm([u("A B"), u("B A"), u("A")])
    toks = ("A", "B")
    manual = lm.logprob("A", BOS) + lm.logprob("B", "A") + lm.logprob(EOS, "B")
    assert lm.sequence_logprob(toks) == pytest.approx(manual)


def test_encoded_tables_match_dict_api(fixture_lm):
    from bisect import bisect_left

    w2i, row_start, follower, logp, backoff, uni, bos_id, eos_id = fixture_lm.encoded()
    rng = random.Random(11)
    words = sorted(fixture_lm.vocab)
    for _ in range(200):
        h = rng.choice(words + [BOS])
        w = rng.choice(words)
        hid, wid = w2i[h], w2i[w]
        lo, hi = row_start[hid], row_start[hid + 1]
        k = bisect_left(follower, wid, lo, hi)
        got = logp[k] if k < hi and follower[k] == wid else backoff[hid] + uni[wid]
        assert got == fixture_lm.logprob(w, h)
