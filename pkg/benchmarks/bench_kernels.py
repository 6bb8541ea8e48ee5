"""Compare the compiled and pure-Python kernels on realistic workloads.

Run:  python3 benchmarks/bench_kernels.py [--decodes N] [--alignments N]
"""

from __future__ import annotations

import argparse
import random
import time

from railtalk import kernels
from railtalk.channel import train_channel
from railtalk.corpora import corrupt_corpus, default_noise_profile, synthetic_sentences, training_pairs
from railtalk.decoder import correct
from railtalk.kernels import pure
from railtalk.lm import train_lm
from railtalk.textnorm import Utterance

try:
    from railtalk.kernels import _speed
except ImportError:
    _speed = None


def bench_align(impl, pairs, repeat):
    table: dict[str, int] = {}

    def ids(toks):
        return [table.setdefault(t, len(table)) for t in toks]

    jobs = [(ids(p.ref), ids(p.hyp)) for p in pairs]
    t0 = time.perf_counter()
    for _ in range(repeat):
        for r, h in jobs:
            impl.align_ops(r, h)
    return time.perf_counter() - t0


def bench_decode(impl, prefers_numpy, cm, lm, hyps):
    old = (kernels.decode_lattice, kernels.PREFERS_NUMPY)
    kernels.decode_lattice, kernels.PREFERS_NUMPY = impl.decode_lattice, prefers_numpy
    try:
        t0 = time.perf_counter()
        out = [correct(cm, lm, h) for h in hyps]
        return time.perf_counter() - t0, out
    finally:
        kernels.decode_lattice, kernels.PREFERS_NUMPY = old


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--decodes", type=int, default=2000)
    parser.add_argument("--alignments", type=int, default=20000)
    args = parser.parse_args()

    print(f"active backend: {kernels.BACKEND}")
    pairs = training_pairs()
    lm = train_lm([Utterance(p.ref) for p in pairs])
    cm = train_channel(pairs)
    sents = synthetic_sentences(args.decodes, seed=17)
    hyps = [p.hyp for p in corrupt_corpus(sents, default_noise_profile(seed=19))]

    backends = [("pure", pure, False)]
    if _speed is not None:
        backends.append(("compiled", _speed, True))

    align_repeat = max(1, args.alignments // len(pairs))
    rows = []
    outputs = {}
    for name, impl, wants_np in backends:
        ta = bench_align(impl, pairs, align_repeat)
        td, out = bench_decode(impl, wants_np, cm, lm, hyps)
        outputs[name] = out
        rows.append((name, align_repeat * len(pairs) / ta, len(hyps) / td))

    print(f"{'backend':>9} {'alignments/s':>14} {'decodes/s':>11}")
    for name, aps, dps in rows:
        print(f"{name:>9} {aps:>14.0f} {dps:>11.0f}")
    if len(outputs) == 2:
        same = outputs["pure"] == outputs["compiled"]
        print(f"outputs identical across backends: {same}")
        if not same:
            raise SystemExit(1)


if __name__ == "__main__":
    main()
