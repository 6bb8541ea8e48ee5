import math
import random

import pytest

from railtalk.align import align
from railtalk.channel import ChannelModel, train_channel
from railtalk.decoder import correct, exhaustive_correct
from railtalk.lm import train_lm
from railtalk.textnorm import Utterance


def uniform_lm(words):
    return train_lm([Utterance((w,)) for w in words])


def test_empty_input():
    cm = ChannelModel(sub={}, fertility={})
    lm = uniform_lm(["A"])
    assert correct(cm, lm, []) == ([], 0.0)
    assert exhaustive_correct(cm, lm, []) == ([], 0.0)


def test_identity_channel_fixpoint(fixture_lm):
    cm = ChannelModel(sub={}, fertility={})  # passthrough only
    for text in ("GO VIA DETROIT", "OKAY", "ZYZZY GLORP", "THE ENGINE AT ALBANY"):
        toks = tuple(text.split())
        out, _ = correct(cm, fixture_lm, toks)
        assert tuple(out) == toks


def test_point_mass_channel_forced():
    cm = ChannelModel(sub={"X": {"Y": 1.0}}, fertility={})
    lm = uniform_lm(["X"])
    out, _ = correct(cm, lm, ["Y"])
    assert out == ["X"]


def _random_instance(rng):
    vocab = ["GO", "VIA", "TO", "AT", "AND", "STOP"]
    junk = ["B_X", "P_M"]
    n_pairs = rng.randint(3, 8)
    pairs = []
    for _ in range(n_pairs):
        ref = [rng.choice(vocab) for _ in range(rng.randint(1, 4))]
        hyp = [rng.choice(vocab + junk) for _ in range(rng.randint(1, 5))]
        pairs.append(align(ref, hyp))
    cm = train_channel(pairs, smoothing=rng.choice([0.1, 0.5, 1.0]))
    corpus = [Utterance(tuple(rng.choice(vocab) for _ in range(rng.randint(1, 4))))
              for _ in range(rng.randint(2, 6))]
    lm = train_lm(corpus, discount=rng.choice([0.3, 0.5, 0.7]))
    observed = [rng.choice(vocab + junk) for _ in range(rng.randint(1, 5))]
    return cm, lm, observed


def test_unbounded_beam_matches_exhaustive_oracle():
    rng = random.Random(2024)
    for _ in range(100):
        cm, lm, observed = _random_instance(rng)
        got = correct(cm, lm, observed, beam_width=None)
        want = exhaustive_correct(cm, lm, observed)
        assert got == want, (observed, got, want)


def test_beam_scores_monotone_in_width():
    rng = random.Random(99)
    for _ in range(40):
        cm, lm, observed = _random_instance(rng)
        scores = [correct(cm, lm, observed, beam_width=k)[1] for k in (1, 2, 4, 8)]
        exact = correct(cm, lm, observed, beam_width=None)[1]
        for a, b in zip(scores, scores[1:]):
            assert b >= a
        for s in scores:
            assert s <= exact


def test_oracle_refuses_oversized_inputs(fixture_channel, fixture_lm):
    with pytest.raises(ValueError):
        exhaustive_correct(fixture_channel, fixture_lm, ["GO"])  # huge vocab
    cm = ChannelModel(sub={}, fertility={})
    lm = uniform_lm(["A"])
    with pytest.raises(ValueError):
        exhaustive_correct(cm, lm, ["A"] * 7)  # too long


def test_beam_width_validation(fixture_channel, fixture_lm):
    with pytest.raises(ValueError):
        correct(fixture_channel, fixture_lm, ["GO"], beam_width=0)


def test_appendix_line_corrections(fixture_channel, fixture_lm):
    out, _ = correct(fixture_channel, fixture_lm, "GO B_X SYRACUSE AT BUFFALO".split())
    assert out == "GO VIA SYRACUSE VIA BUFFALO".split()
    out, _ = correct(fixture_channel, fixture_lm, "LET'S GO P_M TO TRY".split())
    assert "DETROIT" in out


def test_score_is_channel_plus_lm(fixture_channel, fixture_lm):
    observed = ["OKAY"]
    out, score = correct(fixture_channel, fixture_lm, observed)
    chan = fixture_channel.logprob(out[0], (observed[0],))
    manual = chan + fixture_lm.sequence_logprob(tuple(out))
    assert score == pytest.approx(manual)


def test_deterministic(fixture_channel, fixture_lm):
    obs = "ME A JET ADD ALBANY NEEDS TO GO TO MILWAUKEE".split()
    assert correct(fixture_channel, fixture_lm, obs) == correct(fixture_channel, fixture_lm, obs)
