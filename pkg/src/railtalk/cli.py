"""Command-line front end: thin wrappers over the library operations."""

from __future__ import annotations

import argparse
import json
import random
import sys

from .align import align, wer
from .channel import train_channel
from .chart import parse_chart
from .corpora import (corrupt_corpus, default_noise_profile, load_corpus,
                      save_corpus, synthetic_sentences)
from .acts import extract_acts
from .decoder import DEFAULT_BEAM, correct
from .evalcurve import eval_postcorrection
from .grammar import load_grammar
from .lm import train_lm
from .modelio import load_channel, load_lm, save_channel, save_lm
from .session import load_transcript, replay
from .textnorm import Channel, Utterance, tokenize
from .world import load_scenario


def _cmd_train_lm(args):
    pairs = load_corpus(args.corpus)
    lm = train_lm([Utterance(p.ref) for p in pairs], discount=args.discount)
    save_lm(lm, args.out)
    print(f"trained bigram model on {len(pairs)} utterances -> {args.out}")


def _cmd_train_channel(args):
    pairs = load_corpus(args.corpus)
    cm = train_channel(pairs, smoothing=args.smoothing)
    save_channel(cm, args.out)
    print(f"trained channel on {len(pairs)} aligned pairs -> {args.out}")


def _cmd_correct(args):
    cm = load_channel(args.channel_model)
    lm = load_lm(args.lm)
    lines = [args.text] if args.text else [ln.strip() for ln in sys.stdin if ln.strip()]
    for line in lines:
        fixed, score = correct(cm, lm, tokenize(line), args.beam_width)
        print(" ".join(fixed))


def _cmd_parse(args):
    grammar = load_grammar(args.grammar)
    tokens = tokenize(args.text)
    seq = extract_acts(parse_chart(tokens, grammar), tokens)
    out = {
        "tokens": tokens,
        "acts": [{"type": a.act_type, "span": [a.start, a.end], "content": a.content}
                 for a in seq.acts],
        "unaccounted": [tokens[i] for i in seq.unaccounted(len(tokens))],
        "confidence": round(seq.confidence, 4),
    }
    print(json.dumps(out, indent=2))


def _cmd_replay(args):
    scenario = load_scenario(args.scenario)
    turns = load_transcript(args.transcript)
    kwargs = {}
    if args.channel_model and args.lm:
        kwargs = {"channel_model": load_channel(args.channel_model),
                  "language_model": load_lm(args.lm)}
    report, session = replay(scenario, turns, Channel[args.channel], seed=args.seed,
                             session_kwargs=kwargs)
    if args.verbose:
        for rec in session.turn_log:
            print(f"U: {rec.user_text}")
            if rec.corrected_text != rec.user_text:
                print(f"   ({rec.corrected_text})")
            print(f"S: {rec.response_text}")
    print(json.dumps({
        "turnsToCompletion": report.turns_to_completion,
        "solutionHours": report.solution_hours,
        "goalsMet": report.goals_met,
        "solutionMarker": report.solution_marker,
        "wer": report.wer,
    }, indent=2))


def _cmd_corrupt(args):
    sentences = synthetic_sentences(args.n, seed=args.seed)
    profile = default_noise_profile(seed=args.profile_seed)
    pairs = corrupt_corpus(sentences, profile)
    if args.out:
        save_corpus(pairs, args.out)
        print(f"wrote {len(pairs)} REF/HYP pairs (WER {wer(pairs).rate:.3f}) -> {args.out}")
    else:
        for p in pairs:
            print("REF:", " ".join(p.ref))
            print("HYP:", " ".join(p.hyp))
            print()


def _cmd_eval_curve(args):
    pairs = load_corpus(args.corpus)
    rng = random.Random(args.seed)
    idx = list(range(len(pairs)))
    rng.shuffle(idx)
    cut = round(len(pairs) * (1 - args.test_fraction))
    train = [pairs[i] for i in idx[:cut]]
    test = [pairs[i] for i in idx[cut:]]
    fractions = tuple(float(f) for f in args.fractions.split(","))
    points = eval_postcorrection(train, test, fractions, resamples=args.resamples,
                                 seed=args.seed)
    print(f"{'fraction':>9} {'baseline':>9} {'corrected':>10}")
    for pt in points:
        print(f"{pt.fraction:>9.2f} {pt.baseline_wer:>9.4f} {pt.corrected_wer:>10.4f}")


def _cmd_serve(args):
    from .webapp import ServiceConfig, serve

    overrides = {
        "host": args.host,
        "port": args.port,
        "map_path": args.map,
        "scenario_dir": args.scenario_dir,
        "lm_path": args.lm,
        "channel_model_path": args.channel_model,
        "default_seed": args.seed,
    }
    serve(ServiceConfig.load(args.config, overrides))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="railtalk",
                                     description="Robust route-planning dialogue system")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-lm", help="train the back-off bigram model")
    p.add_argument("--corpus", required=True, help="REF/HYP transcript corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--discount", type=float, default=0.5)
    p.set_defaults(func=_cmd_train_lm)

    p = sub.add_parser("train-channel", help="train the word confusion channel")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--smoothing", type=float, default=0.5)
    p.set_defaults(func=_cmd_train_channel)

    p = sub.add_parser("correct", help="decode noisy text (stdin lines or --text)")
    p.add_argument("--lm", required=True)
    p.add_argument("--channel-model", required=True)
    p.add_argument("--text")
    p.add_argument("--beam-width", type=int, default=DEFAULT_BEAM)
    p.set_defaults(func=_cmd_correct)

    p = sub.add_parser("parse", help="parse one utterance into speech acts")
    p.add_argument("--text", required=True)
    p.add_argument("--grammar", default=None)
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("replay", help="replay a transcript against a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--transcript", required=True)
    p.add_argument("--channel", default="KEYBOARD", choices=["KEYBOARD", "SPEECH"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lm")
    p.add_argument("--channel-model")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("corrupt", help="generate a synthetic noisy corpus")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=41)
    p.add_argument("--profile-seed", type=int, default=43)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("eval-curve", help="training-fraction evaluation")
    p.add_argument("--corpus", required=True)
    p.add_argument("--fractions", default="0.25,0.5,0.75")
    p.add_argument("--resamples", type=int, default=10)
    p.add_argument("--test-fraction", type=float, default=0.25)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_eval_curve)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--config", help="JSON config file (or RAILTALK_CONFIG)")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--map")
    p.add_argument("--scenario-dir")
    p.add_argument("--lm")
    p.add_argument("--channel-model")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
