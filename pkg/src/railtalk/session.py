"""Interactive sessions: the full pipeline, transcript replay, evaluation.

Pipeline per turn: scripted events fire, SPEECH input runs through the
statistical corrector (KEYBOARD bypasses it), the chart parser extracts
a speech-act cover, references resolve, the verbal reasoner and problem
solver interpret, and templates realize the response plus display
commands. Any internal stage failure degrades to a clarification
response; the session stays live.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
import threading
from dataclasses import dataclass, field
from importlib import resources

from .acts import ActSequence, extract_acts
from .align import align, wer
from .channel import ChannelModel
from .chart import parse_chart
from .decoder import correct
from .discourse import DiscourseManager
from .generate import Template, load_templates, realize_all
from .grammar import Grammar, load_grammar
from .lm import BigramLM
from .responses import ResponseAct
from .textnorm import Channel, tokenize
from .world import Scenario, ScoreReport, WorldState, world_for_scenario

log = logging.getLogger(__name__)

_COMMAND_KINDS = ("SHOW_MAP", "SHOW_ROUTE", "CLEAR_ROUTE", "MARK_CONGESTION",
                  "HIGHLIGHT_CITY", "UTTERANCE")


@dataclass(frozen=True)
class DisplayCommand:
    kind: str
    payload: dict

    def __post_init__(self):
        if self.kind not in _COMMAND_KINDS:
            raise ValueError(f"unknown display command kind {self.kind!r}")

    def as_dict(self) -> dict:
        return {"kind": self.kind, **self.payload}


@dataclass(frozen=True)
class TurnRecord:
    index: int
    user_text: str
    corrected_text: str
    acts: tuple[tuple[str, str], ...]  # (act type, content key)
    response_text: str
    display_commands: tuple[DisplayCommand, ...]
    world_hash: str


@dataclass
class EvalReport:
    turns_to_completion: int
    solution_hours: float
    goals_met: bool
    solution_marker: str | None = None
    wer: float | None = None

    def __post_init__(self):
        if not self.goals_met:
            self.solution_marker = ScoreReport.INCOMPLETE


class Session:
    """One dialogue. Turns are serialized; shared artifacts are immutable."""

    def __init__(
        self,
        session_id: str,
        scenario: Scenario,
        seed: int = 0,
        channel: Channel = Channel.KEYBOARD,
        grammar: Grammar | None = None,
        templates: dict[str, Template] | None = None,
        channel_model: ChannelModel | None = None,
        language_model: BigramLM | None = None,
        map_path: str | None = None,
    ):
        self.id = session_id
        self.scenario = scenario
        self.seed = seed
        self.channel = channel
        self.world: WorldState = world_for_scenario(scenario, map_path)
        self.rng = random.Random(seed)
        self.grammar = grammar or load_grammar()
        self.templates = templates or load_templates()
        self.channel_model = channel_model
        self.language_model = language_model
        self.manager = DiscourseManager(self.world, self.rng)
        self.turn_log: list[TurnRecord] = []
        self.events: list[DisplayCommand] = []
        self._lock = threading.Lock()
        self._emit_initial_events()

    # -- properties ----------------------------------------------------------

    @property
    def complete(self) -> bool:
        return self.manager.state.complete

    def greeting(self) -> str:
        return "Ok. I think I'm ready to start."

    def world_hash(self) -> str:
        canon = json.dumps(self.world.snapshot(), sort_keys=True)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]

    def _emit_initial_events(self):
        self._record_command(DisplayCommand("SHOW_MAP", {}))

    def _record_command(self, cmd: DisplayCommand):
        self.events.append(cmd)

    # -- turn pipeline ---------------------------------------------------------

    def _correct_tokens(self, tokens: list[str]) -> list[str]:
        if self.channel_model is None or self.language_model is None:
            return tokens
        fixed, _score = correct(self.channel_model, self.language_model, tokens)
        return fixed

    def _validate_command(self, raw: dict) -> DisplayCommand | None:
        payload = {k: v for k, v in raw.items() if k != "kind"}
        try:
            cmd = DisplayCommand(raw["kind"], payload)
            if "city" in payload:
                self.world.city_id(payload["city"])
            if "engineId" in payload and payload["engineId"] not in self.world.engines:
                raise KeyError(payload["engineId"])
            for cid in payload.get("path", ()):
                self.world.city_id(cid)
        except (KeyError, ValueError) as exc:
            log.warning("dropping display command %s: %s", raw, exc)
            return None
        return cmd

    def turn(self, user_text: str, channel: Channel | None = None,
             strict: bool = False) -> tuple[str, list[DisplayCommand]]:
        with self._lock:
            return self._turn_locked(user_text, channel or self.channel, strict)

    def _turn_locked(self, user_text: str, channel: Channel,
                     strict: bool = False) -> tuple[str, list[DisplayCommand]]:
        self.world.turn_index += 1
        pre_acts: list[ResponseAct] = []
        corrected_tokens: list[str] = []
        try:
            for event in self.scenario.events:
                if event.turn == self.world.turn_index:
                    self.world.apply_event(event)
                    for name in event.cities:
                        pre_acts.append(ResponseAct("CONGESTION", {
                            "city": self.world.city_id(name),
                            "hours": event.extra_hours,
                        }))
            tokens = tokenize(user_text)
            if channel is Channel.SPEECH:
                corrected_tokens = self._correct_tokens(tokens)
            else:
                corrected_tokens = list(tokens)
            chart = parse_chart(corrected_tokens, self.grammar)
            acts: ActSequence = extract_acts(chart, corrected_tokens)
            responses = pre_acts + self.manager.interpret(acts)
            act_log = tuple((a.act_type, a.content_key()) for a in acts.acts)
        except KeyError:
            if strict:
                raise  # replay wants scenario mismatches loud
            log.exception("turn pipeline failure; responding with a clarification")
            responses = [ResponseAct("PARDON", {"error": True})]
            act_log = ()
        except Exception:  # degrade, never drop the session
            log.exception("turn pipeline failure; responding with a clarification")
            responses = [ResponseAct("PARDON", {"error": True})]
            act_log = ()
        text, raw_commands = realize_all(responses, self.world, self.rng, self.templates)
        commands = [c for c in (self._validate_command(r) for r in raw_commands) if c]
        commands.append(DisplayCommand("UTTERANCE", {"speaker": "SYSTEM", "text": text}))
        for cmd in commands:
            self._record_command(cmd)
        record = TurnRecord(
            index=self.world.turn_index,
            user_text=user_text,
            corrected_text=" ".join(corrected_tokens),
            acts=act_log,
            response_text=text,
            display_commands=tuple(commands),
            world_hash=self.world_hash(),
        )
        self.turn_log.append(record)
        return text, commands

    def report(self, wer_rate: float | None = None) -> EvalReport:
        score = self.world.score_solution()
        return EvalReport(
            turns_to_completion=len(self.turn_log),
            solution_hours=score.total_hours,
            goals_met=self.complete and score.complete,
            wer=wer_rate,
        )


# ---------------------------------------------------------------------------
# Transcript replay

class TranscriptFormatError(ValueError):
    def __init__(self, path: str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")


def parse_transcript(text: str, path: str = "<transcript>") -> list[tuple[str, str | None]]:
    """User turns: repeated "U: <text>" lines, each optionally followed by
    a "REF: <text>" line giving the reference transcription for WER."""
    turns: list[tuple[str, str | None]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.upper().startswith("S:"):
            continue
        if line.upper().startswith("U:"):
            turns.append((line[2:].strip(), None))
        elif line.upper().startswith("REF:"):
            if not turns or turns[-1][1] is not None:
                raise TranscriptFormatError(path, line_no, "REF line without a preceding U line")
            turns[-1] = (turns[-1][0], line[4:].strip())
        else:
            raise TranscriptFormatError(path, line_no, f"unrecognized line {line!r}")
    return turns


def load_transcript(path: str) -> list[tuple[str, str | None]]:
    with open(path, encoding="utf-8") as fh:
        return parse_transcript(fh.read(), path)


def load_fixture_transcript(name: str) -> list[tuple[str, str | None]]:
    text = resources.files("railtalk.data").joinpath(name).read_text("utf-8")
    return parse_transcript(text, name)


def replay(
    scenario: Scenario,
    turns: list[tuple[str, str | None]],
    channel: Channel = Channel.KEYBOARD,
    seed: int = 0,
    session_kwargs: dict | None = None,
) -> tuple[EvalReport, Session]:
    """Run a transcript through a fresh session and report task metrics."""
    session = Session("replay", scenario, seed=seed, channel=channel,
                      **(session_kwargs or {}))
    pairs = []
    for turn_no, (user_text, ref) in enumerate(turns, start=1):
        try:
            session.turn(user_text, channel, strict=True)
        except KeyError as exc:
            raise ValueError(f"turn {turn_no}: unknown entity {exc}") from exc
        if ref is not None:
            pairs.append(align(tokenize(ref), tokenize(session.turn_log[-1].corrected_text)))
    rate = wer(pairs).rate if pairs else None
    return session.report(wer_rate=rate), session
