"""Training-fraction evaluation of the post-corrector.

For each training fraction, the corrector is trained on seeded resamples
of the training pairs and scored on the held-out pairs: word error rate
of the raw hypotheses versus the corrected ones. Absolute numbers are
artifact-relative; the claims under test are that correction beats the
baseline and that more training data does not hurt.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .align import AlignedPair, align, wer
from .channel import train_channel
from .decoder import DEFAULT_BEAM, correct
from .lm import train_lm
from .textnorm import Utterance

ALLOWED_FRACTIONS = (0.0, 0.25, 0.5, 0.75)


@dataclass(frozen=True)
class CurvePoint:
    fraction: float
    baseline_wer: float
    corrected_wer: float


def correct_pairs(cm, lm, pairs: list[AlignedPair], beam_width: int = DEFAULT_BEAM) -> list[AlignedPair]:
    """Re-align each pair's ref against the decoded hyp."""
    out = []
    for p in pairs:
        fixed, _score = correct(cm, lm, p.hyp, beam_width)
        out.append(align(p.ref, fixed))
    return out


def eval_postcorrection(
    train_pairs: list[AlignedPair],
    test_pairs: list[AlignedPair],
    fractions: tuple[float, ...] = (0.25, 0.5, 0.75),
    resamples: int = 10,
    seed: int = 0,
    beam_width: int = DEFAULT_BEAM,
) -> list[CurvePoint]:
    """Per-fraction mean corrected WER against the shared baseline WER.

    train_pairs and test_pairs must be disjoint (checked by content).
    Fraction 0.0 degenerates to the identity corrector.
    """
    for f in fractions:
        if f not in ALLOWED_FRACTIONS:
            raise ValueError(f"unsupported training fraction {f}")
    if not test_pairs:
        raise ValueError("empty test set")
    train_keys = {(p.ref, p.hyp) for p in train_pairs}
    if any((p.ref, p.hyp) in train_keys for p in test_pairs):
        raise ValueError("train and test pairs overlap")

    baseline = wer(test_pairs).rate
    points: list[CurvePoint] = []
    for f in sorted(fractions):
        if f == 0.0:
            points.append(CurvePoint(0.0, baseline, baseline))
            continue
        rates = []
        for r in range(resamples):
            rng = random.Random(seed * 1_000_003 + round(f * 100) * 1_009 + r)
            subset = rng.sample(train_pairs, round(f * len(train_pairs)))
            lm = train_lm([Utterance(p.ref) for p in subset])
            cm = train_channel(subset)
            rates.append(wer(correct_pairs(cm, lm, test_pairs, beam_width)).rate)
        points.append(CurvePoint(f, baseline, sum(rates) / len(rates)))
    return points
