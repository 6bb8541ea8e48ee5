import pytest

from railtalk.textnorm import EMPTY_UTTERANCE, Utterance, normalize_token, tokenize


@pytest.mark.parametrize("raw,want", [
    ("that-", "THAT"),
    ("Let's", "LET'S"),
    ("B_X", "B_X"),
    ("o_o's", "O_O'S"),
    ("Boston.", "BOSTON"),
    ("(sic)", "SIC"),
    ("--", ""),
    ("New", "NEW"),
])
def test_normalize(raw, want):
    assert normalize_token(raw) == want


def test_normalize_idempotent():
    for raw in ("that-", "I'm", "B_X", "don't.", "++", "much,"):
        once = normalize_token(raw)
        assert normalize_token(once) == once


def test_tokenize_drops_empty():
    assert tokenize("well - that's ok.") == ["WELL", "THAT'S", "OK"]


def test_utterance_rejects_bad_tokens():
    with pytest.raises(ValueError):
        Utterance(("A B",))
    with pytest.raises(ValueError):
        Utterance(("",))


def test_empty_utterance_allowed():
    assert len(EMPTY_UTTERANCE) == 0
