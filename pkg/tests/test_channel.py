import math

import pytest

from railtalk.align import align
from railtalk.channel import ChannelModel, realign_with_splits, train_channel
from railtalk import kernels


def test_identical_pairs_concentrate_on_diagonal():
    pairs = [align("GO VIA DETROIT".split(), "GO VIA DETROIT".split())] * 4
    cm = train_channel(pairs, smoothing=0.5)
    for w in ("GO", "VIA", "DETROIT"):
        # one extra smoothing unit beyond the identity cell never appears:
        # support is {self} only, so everything lands on the diagonal
        assert cm.sub[w][w] == pytest.approx(1.0)


def test_appendix_confusions_present(fixture_channel):
    assert fixture_channel.sub["VIA"]["B_X"] > 0
    assert fixture_channel.sub["AND"]["AT"] > 0


def test_fertility_pair_learned(fixture_channel):
    assert fixture_channel.fertility["DETROIT"][("TO", "TRY")] > 0


def test_rows_normalize(fixture_channel):
    for s in fixture_channel.sources():
        total = sum(fixture_channel.sub.get(s, {}).values())
        total += sum(fixture_channel.fertility.get(s, {}).values())
        assert abs(total - 1.0) < 1e-9, s


def test_self_floor_enforced(fixture_channel):
    for s, row in fixture_channel.sub.items():
        assert row[s] >= fixture_channel.self_floor - 1e-12


def test_probabilities_in_unit_interval(fixture_channel):
    for row in fixture_channel.sub.values():
        for p in row.values():
            assert 0 < p <= 1
    for row in fixture_channel.fertility.values():
        for p in row.values():
            assert 0 < p <= 1


def test_realign_prefers_split_over_sub_plus_ins():
    got = realign_with_splits(tuple("LET'S GO VIA DETROIT".split()),
                              tuple("LET'S GO P_M TO TRY".split()))
    split_ops = [(src, obs) for code, src, obs in got if code == kernels.SPLIT]
    assert split_ops == [("DETROIT", ("TO", "TRY"))]


def test_realign_prefers_match_plus_ins_over_split():
    got = realign_with_splits(("GO",), ("GO", "UH"))
    codes = [code for code, _, _ in got]
    assert codes == [kernels.MATCH, kernels.INS]


def test_unknown_word_passthrough_logprob():
    cm = ChannelModel(sub={}, fertility={})
    assert cm.logprob("P_M", ("P_M",)) == cm.unk_penalty
    assert cm.logprob("P_M", ("Q",)) is None
    assert cm.candidates("P_M") == [("P_M", cm.unk_penalty)]


def test_trained_self_emission_not_double_counted(fixture_channel):
    # a trained source emits itself at its trained probability, not the
    # unk passthrough penalty
    via_self = fixture_channel.logprob("VIA", ("VIA",))
    assert via_self == pytest.approx(math.log(fixture_channel.sub["VIA"]["VIA"]))


def test_smoothing_validation():
    with pytest.raises(ValueError):
        train_channel([], smoothing=-1)
