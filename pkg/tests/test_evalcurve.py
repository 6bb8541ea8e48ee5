import pytest

from railtalk.align import align, wer
from railtalk.corpora import corrupt_corpus, default_noise_profile, synthetic_sentences
from railtalk.evalcurve import correct_pairs, eval_postcorrection


@pytest.fixture(scope="module")
def split_corpus():
    sents = synthetic_sentences(400, seed=61)
    pairs = corrupt_corpus(sents, default_noise_profile(seed=63))
    return pairs[:300], pairs[300:]


def test_zero_fraction_is_identity(split_corpus):
    train, test = split_corpus
    points = eval_postcorrection(train, test, fractions=(0.0,), resamples=2)
    assert points[0].corrected_wer == points[0].baseline_wer


def test_overlap_rejected(split_corpus):
    train, test = split_corpus
    with pytest.raises(ValueError):
        eval_postcorrection(train, train[:50], fractions=(0.25,))


def test_unsupported_fraction_rejected(split_corpus):
    train, test = split_corpus
    with pytest.raises(ValueError):
        eval_postcorrection(train, test, fractions=(0.9,))


def test_correction_beats_baseline(split_corpus):
    train, test = split_corpus
    points = eval_postcorrection(train, test, fractions=(0.75,), resamples=3, seed=1)
    assert points[0].corrected_wer < points[0].baseline_wer


def test_points_sorted_by_fraction(split_corpus):
    train, test = split_corpus
    points = eval_postcorrection(train, test, fractions=(0.5, 0.25), resamples=2, seed=2)
    assert [p.fraction for p in points] == [0.25, 0.5]


def test_correct_pairs_realigns(fixture_channel, fixture_lm, appendix_pairs):
    fixed = correct_pairs(fixture_channel, fixture_lm, appendix_pairs)
    assert len(fixed) == len(appendix_pairs)
    assert wer(fixed).rate < wer(appendix_pairs).rate
