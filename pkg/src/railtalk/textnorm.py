"""Token normalization and utterances.

Transcript convention: tokens are uppercase words, compounds joined with
underscores (B_X, I_NEED). Apostrophes and underscores are the only
punctuation that survives normalization; everything else is stripped.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

_KEEP = re.compile(r"[^A-Z0-9'_]+")


class Speaker(enum.Enum):
    USER = "USER"
    SYSTEM = "SYSTEM"


class Channel(enum.Enum):
    SPEECH = "SPEECH"
    KEYBOARD = "KEYBOARD"


def normalize_token(raw: str) -> str:
    """Uppercase and strip punctuation except apostrophes and underscores.

    Idempotent; returns "" for tokens that are all punctuation.
    """
    up = _KEEP.sub("", raw.upper())
    if up.strip("'_") == "":
        return ""
    return up


def tokenize(text: str) -> list[str]:
    """Split on whitespace and normalize; drops empty results."""
    out = []
    for piece in text.split():
        tok = normalize_token(piece)
        if tok:
            out.append(tok)
    return out


@dataclass(frozen=True)
class Utterance:
    tokens: tuple[str, ...]
    speaker: Speaker = Speaker.USER
    channel: Channel = Channel.KEYBOARD

    def __post_init__(self):
        for t in self.tokens:
            if not t or any(c.isspace() for c in t):
                raise ValueError(f"bad token {t!r}")

    @classmethod
    def from_text(cls, text: str, speaker: Speaker = Speaker.USER,
                  channel: Channel = Channel.KEYBOARD) -> "Utterance":
        return cls(tuple(tokenize(text)), speaker, channel)

    def text(self) -> str:
        return " ".join(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


EMPTY_UTTERANCE = Utterance(())
