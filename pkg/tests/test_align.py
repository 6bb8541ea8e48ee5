import random
from functools import lru_cache

import pytest

from railtalk.align import AlignedPair, Op, align, wer


def brute_levenshtein(ref, hyp):
    """Independent recursion, unit costs."""
    ref, hyp = tuple(ref), tuple(hyp)

    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == len(ref):
            return len(hyp) - j
        if j == len(hyp):
            return len(ref) - i
        best = rec(i + 1, j + 1) + (0 if ref[i] == hyp[j] else 1)
        return min(best, rec(i + 1, j) + 1, rec(i, j + 1) + 1)

    return rec(0, 0)


def test_identity_alignment():
    got = align(["A", "B"], ["A", "B"])
    assert [op for op, _, _ in got.ops] == [Op.MATCH, Op.MATCH]
    assert got.errors() == 0


def test_appendix_confusion_line():
    ref = "GO VIA SYRACUSE AND BUFFALO".split()
    hyp = "GO B_X SYRACUSE AT BUFFALO".split()
    got = align(ref, hyp)
    assert [op for op, _, _ in got.ops] == [Op.MATCH, Op.SUB, Op.MATCH, Op.SUB, Op.MATCH]
    assert (Op.SUB, "VIA", "B_X") in got.ops
    assert (Op.SUB, "AND", "AT") in got.ops


def test_one_to_two_replacement_cost():
    ref = "LET'S GO VIA DETROIT".split()
    hyp = "LET'S GO P_M TO TRY".split()
    got = align(ref, hyp)
    assert got.errors() == brute_levenshtein(ref, hyp) == 3


def test_empty_inputs():
    assert [op for op, _, _ in align([], ["X", "Y"]).ops] == [Op.INS, Op.INS]
    assert [op for op, _, _ in align(["X", "Y"], []).ops] == [Op.DEL, Op.DEL]
    assert align([], []).ops == ()


def _random_tokens(rng, n, vocab="ABCDEF"):
    return [rng.choice(vocab) for _ in range(n)]


def test_cost_matches_bruteforce_oracle():
    rng = random.Random(42)
    for _ in range(400):
        ref = _random_tokens(rng, rng.randint(0, 6))
        hyp = _random_tokens(rng, rng.randint(0, 6))
        assert align(ref, hyp).errors() == brute_levenshtein(ref, hyp)


def test_replay_and_count_invariants():
    rng = random.Random(7)
    for _ in range(1200):
        ref = _random_tokens(rng, rng.randint(0, 8))
        hyp = _random_tokens(rng, rng.randint(0, 8))
        pair = align(ref, hyp)
        assert pair.replay() == tuple(hyp)
        ops = [op for op, _, _ in pair.ops]
        n_match = ops.count(Op.MATCH)
        s, i, d = pair.counts()
        assert n_match + s + d == len(ref)
        assert n_match + s + i == len(hyp)


def test_alignment_is_deterministic():
    ref = "A B C D".split()
    hyp = "B C D E".split()
    assert align(ref, hyp) == align(ref, hyp)


def test_wer_identity_pair_is_zero():
    pair = align(["A"] * 5, ["A"] * 5)
    assert wer([pair]).rate == 0.0


def test_wer_hand_counted():
    # 4 ref words, one substitution and one insertion: (1+1)/4
    pair = align("A B C D".split(), "A X B C D".split())
    assert pair.counts() == (0, 1, 0) or pair.errors() == 2
    pair2 = align("A B C D".split(), "A X C D Y".split())
    assert wer([pair2]).rate == pytest.approx(0.5)


def test_wer_rejects_empty_list():
    with pytest.raises(ValueError):
        wer([])


def test_wer_pools_counts():
    p1 = align("A B".split(), "A X".split())
    p2 = align("C D E".split(), "C D E".split())
    rep = wer([p1, p2])
    assert rep.ref_words == 5
    assert rep.substitutions == 1
    assert rep.rate == pytest.approx(0.2)
