"""Transcript corpora: file IO, synthetic sentences, and a seeded corrupter.

The corrupter stands in for a speech recognizer at desk scale: it applies
per-word substitution tables (whose targets may be multi-token strings,
covering one-word-to-two-word confusions), random half-splits, deletions
and filler insertions. Everything is deterministic given the profile seed
and the input tokens.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from importlib import resources

from .align import AlignedPair, align
from .textnorm import Utterance, tokenize

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class NoiseProfile:
    """Corruption model. substitutions[w] is a distribution over replacement
    strings (identity included) summing to 1; words absent from the table
    are never substituted."""

    substitutions: dict[str, dict[str, float]]
    split_rate: float = 0.0
    delete_rate: float = 0.0
    insert_rate: float = 0.0
    seed: int = 0
    fillers: tuple[str, ...] = ("UH", "UP", "IT", "A", "IN")

    def __post_init__(self):
        for rate in (self.split_rate, self.delete_rate, self.insert_rate):
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"rate out of range: {rate}")
        if self.delete_rate + self.split_rate > 1.0:
            raise ValueError("delete_rate + split_rate exceed 1")
        for word, dist in self.substitutions.items():
            total = sum(dist.values())
            if abs(total - 1.0) > _SUM_TOL:
                raise ValueError(f"substitution row for {word} sums to {total}")
            if any(p < 0 for p in dist.values()):
                raise ValueError(f"negative probability under {word}")


def _utterance_rng(seed: int, tokens: tuple[str, ...]) -> random.Random:
    payload = str(seed) + "\x1f" + "\x1f".join(tokens)
    digest = hashlib.sha256(payload.encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _draw(dist: dict[str, float], rng: random.Random) -> str:
    r = rng.random()
    acc = 0.0
    last = None
    for key in sorted(dist):
        acc += dist[key]
        last = key
        if r < acc:
            return key
    assert last is not None
    return last


def corrupt(u: Utterance, profile: NoiseProfile) -> Utterance:
    """Apply the noise profile to one utterance, deterministically."""
    rng = _utterance_rng(profile.seed, u.tokens)
    out: list[str] = []
    for tok in u.tokens:
        r = rng.random()
        if r < profile.delete_rate:
            pass
        elif r < profile.delete_rate + profile.split_rate and len(tok) >= 4:
            cut = len(tok) // 2
            out.extend([tok[:cut], tok[cut:]])
        elif tok in profile.substitutions:
            out.extend(_draw(profile.substitutions[tok], rng).split())
        else:
            out.append(tok)
        if profile.insert_rate and rng.random() < profile.insert_rate:
            out.append(profile.fillers[rng.randrange(len(profile.fillers))])
    return Utterance(tuple(out), u.speaker, u.channel)


def corrupt_corpus(utterances: list[Utterance], profile: NoiseProfile) -> list[AlignedPair]:
    return [align(u.tokens, corrupt(u, profile).tokens) for u in utterances]


# ---------------------------------------------------------------------------
# Transcript corpus files: repeating "REF: ..." / "HYP: ..." records.

class CorpusFormatError(ValueError):
    def __init__(self, path: str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.line_no = line_no


def parse_corpus(text: str, path: str = "<corpus>") -> list[AlignedPair]:
    """One AlignedPair per REF/HYP line pair; blank and # lines ignored."""
    pairs: list[AlignedPair] = []
    pending_ref: list[str] | None = None
    pending_line = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.upper().startswith("REF:"):
            if pending_ref is not None:
                raise CorpusFormatError(path, pending_line, "REF line lacks a HYP partner")
            pending_ref = tokenize(line[4:])
            pending_line = line_no
        elif line.upper().startswith("HYP:"):
            if pending_ref is None:
                raise CorpusFormatError(path, line_no, "HYP line without preceding REF")
            pairs.append(align(pending_ref, tokenize(line[4:])))
            pending_ref = None
        else:
            raise CorpusFormatError(path, line_no, f"unrecognized line {line!r}")
    if pending_ref is not None:
        raise CorpusFormatError(path, pending_line, "REF line lacks a HYP partner")
    return pairs


def load_corpus(path: str) -> list[AlignedPair]:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh.read(), path)


def save_corpus(pairs: list[AlignedPair], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in pairs:
            fh.write("REF: " + " ".join(p.ref) + "\n")
            fh.write("HYP: " + " ".join(p.hyp) + "\n\n")


def _data_text(name: str) -> str:
    return resources.files("railtalk.data").joinpath(name).read_text(encoding="utf-8")


def recognizer_pairs() -> list[AlignedPair]:
    """The 13 shipped recognizer-output regression pairs."""
    return parse_corpus(_data_text("recognizer_pairs.txt"), "recognizer_pairs.txt")


# Frozen parameters of the shipped training corpus (data/train_corpus.txt).
FIXTURE_CORPUS_SEED = 11
FIXTURE_PROFILE_SEED = 13
FIXTURE_CORPUS_SIZE = 700


def build_fixture_training_pairs() -> list[AlignedPair]:
    """Regenerate the shipped training corpus deterministically."""
    sents = synthetic_sentences(FIXTURE_CORPUS_SIZE, seed=FIXTURE_CORPUS_SEED)
    profile = default_noise_profile(seed=FIXTURE_PROFILE_SEED)
    return corrupt_corpus(sents, profile) + recognizer_pairs()


def training_pairs() -> list[AlignedPair]:
    """The shipped corrector training corpus."""
    return parse_corpus(_data_text("train_corpus.txt"), "train_corpus.txt")


def fixture_cities() -> list[str]:
    doc = json.loads(_data_text("map.json"))
    return [c["name"] for c in doc["cities"]]


# ---------------------------------------------------------------------------
# Synthetic sentence generation over the route-planning domain.

_TEMPLATES = (
    "OKAY LET'S TAKE A TRAIN FROM {a} TO {b}",
    "LET'S TAKE THE TRAIN FROM {a} TO {b}",
    "NOW LET'S TAKE THE TRAIN FROM {a} TO {b}",
    "OKAY NOW LET'S TAKE THE TRAIN FROM {a} TO {b}",
    "NO LET'S TAKE THE TRAIN FROM {a} TO {b} VIA {c}",
    "LET'S TAKE THE TRAIN FROM {a} TO {b} VIA {c}",
    "OKAY NOW LET'S TAKE THE LAST TRAIN AND GO FROM {a} TO {b}",
    "TAKE THE LAST TRAIN AND GO FROM {a} TO {b}",
    "LET'S GO VIA {a}",
    "LET'S GO VIA {a} VIA {b}",
    "GO VIA {a} VIA {b}",
    "LET'S GO TO {a} VIA {b}",
    "GO TO {a} VIA {b}",
    "UH GO VIA {a}",
    "GO FROM {a} TO {b}",
    "GO FROM {a} TO {b} VIA {c}",
    "LET'S GO FROM {a} TO {b}",
    "LET'S MOVE FROM {a} TO {b}",
    "LET'S MOVE THE TRAIN IN {a} TO {b}",
    "THE ENGINE AT {a} NEEDS TO GO TO {b}",
    "THE TRAIN AT {a} NEEDS TO GO TO {b}",
    "CAN WE GO THROUGH {a} INSTEAD",
    "CAN WE MOVE THE TRAIN IN {a} TO {b}",
    "HOW ABOUT GOING THROUGH {a}",
    "LET'S GO AROUND {a}",
    "LET'S GO THROUGH {a} AND {b}",
    "GO THROUGH {a}",
    "YES NOW LET'S GO TO {a}",
    "NOW LET'S GO TO {a}",
    "OKAY NOW GO TO {a}",
    "LET'S CLEAR THE ROUTE FOR {a}",
    "OKAY THAT'S OKAY NOW",
    "THAT'S GOOD I'M DONE",
    "THAT'S GOOD",
    "THAT'S OKAY",
    "OKAY",
    "YES",
    "YEAH",
    "YEP",
    "NO",
    "I'M DONE",
    "OKAY I'M DONE",
    "WE ARE DONE",
    "I THINK WE ARE DONE",
)


# Systematic confusions observed in the shipped recognizer pairs, given as
# (intended word, observed string, share of the word's error mass). Multi
# token strings are one-to-two emissions.
_SEED_CONFUSIONS: dict[str, dict[str, float]] = {
    "TAKE": {"SEE": 0.5, "STATE": 0.5},
    "TRAIN": {"CONTAIN": 1.0},
    "NO": {"NOW": 1.0},
    "VIA": {"B_X": 0.3, "AT": 0.55, "P_M": 0.08, "D_S_X": 0.07},
    "CINCINNATI": {"ANY": 1.0},
    "THAT": {"IT": 1.0},
    "DETROIT": {"TO TRY": 0.7, "D_TROIT": 0.3},
    "LET'S": {"ADD": 1.0},
    "MILWAUKEE": {"O_O'S": 1.0},
    "THE": {"ME": 1.0},
    "ENGINE": {"A JET": 0.6, "JET": 0.4},
    "AT": {"ADD": 1.0},
    "UH": {"I'D": 1.0},
    "AND": {"AT": 0.4, "IN": 0.6},
    "GOOD": {"COULD": 1.0},
    "I'M": {"I": 0.55, "I_NEED": 0.45},
    "DONE": {"CAN": 1.0},
}

# Hand-tuned per-word error masses: VIA confusions dominate the shipped
# pairs; most other words err at the generic rate.
_ERROR_MASS = {"VIA": 0.5, "AND": 0.16, "AT": 0.12, "THE": 0.1, "TO": 0.08, "IN": 0.08}
_GENERIC_ERROR_MASS = 0.26


def _junk_targets(word: str) -> list[str]:
    """Recognizer-style junk: a fragment of the word and a letter code."""
    out = []
    if len(word) >= 4:
        frag = word[: (len(word) + 1) // 2]
        if frag != word:
            out.append(frag)
    code = word[0] + "_X"
    if code != word:
        out.append(code)
    return out


def corpus_vocabulary(utterances: list[Utterance]) -> list[str]:
    return sorted({t for u in utterances for t in u.tokens})


def default_noise_profile(
    seed: int,
    vocab: list[str] | None = None,
    delete_rate: float = 0.03,
    split_rate: float = 0.01,
    insert_rate: float = 0.025,
) -> NoiseProfile:
    """Corruption profile over a vocabulary, aiming for roughly 30% WER.

    Every vocabulary word gets a substitution row: the seed confusions
    above where available, junk fragments otherwise. Rows are stable per
    word, so the errors are systematic and learnable.
    """
    if vocab is None:
        vocab = corpus_vocabulary(synthetic_sentences(2000, seed=7))
    rng = random.Random(seed)
    table: dict[str, dict[str, float]] = {}
    for word in sorted(set(vocab) | set(_SEED_CONFUSIONS)):
        mass = _ERROR_MASS.get(word, _GENERIC_ERROR_MASS)
        targets: dict[str, float] = {}
        if word in _SEED_CONFUSIONS:
            for tgt, share in _SEED_CONFUSIONS[word].items():
                targets[tgt] = mass * share
        else:
            junk = _junk_targets(word)
            if not junk:
                continue
            shares = [0.6, 0.4][: len(junk)]
            # small seeded jitter keeps rows from being perfectly uniform
            jitter = rng.uniform(-0.05, 0.05)
            shares = [shares[0] + jitter] + shares[1:]
            total_share = sum(shares)
            for tgt, share in zip(junk, shares):
                targets[tgt] = mass * share / total_share
        row = {word: 1.0 - sum(targets.values())}
        row.update(targets)
        table[word] = row
    return NoiseProfile(
        substitutions=table,
        split_rate=split_rate,
        delete_rate=delete_rate,
        insert_rate=insert_rate,
        seed=seed,
    )


def synthetic_sentences(n: int, seed: int, cities: list[str] | None = None) -> list[Utterance]:
    """n distinct seeded domain sentences (the corrupter's clean side)."""
    if cities is None:
        cities = fixture_cities()
    rng = random.Random(seed)
    seen: set[tuple[str, ...]] = set()
    out: list[Utterance] = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 200 * n:
            raise ValueError(f"cannot produce {n} distinct sentences")
        tpl = rng.choice(_TEMPLATES)
        a, b, c = rng.sample(cities, 3)
        toks = tuple(tokenize(tpl.format(a=a, b=b, c=c)))
        if toks in seen:
            continue
        seen.add(toks)
        out.append(Utterance(toks))
    return out
