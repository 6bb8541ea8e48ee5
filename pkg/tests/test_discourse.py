import random

import pytest

from railtalk.acts import ActSequence, SpeechAct, extract_acts
from railtalk.chart import parse_chart
from railtalk.discourse import (AWAITING_CLARIFICATION, DiscourseFrame,
                                DiscourseManager, DiscourseState,
                                load_verbal_rules, pop_segment, push_segment,
                                resolve_references)
from railtalk.grammar import load_grammar
from railtalk.psolver import RuleFormatError, load_ps_rules
from railtalk.textnorm import tokenize
from railtalk.world import Route, load_scenario, world_for_scenario


@pytest.fixture(scope="module")
def grammar():
    return load_grammar()


def fresh_manager(seed=0, scenario="three-trains"):
    world = world_for_scenario(load_scenario(scenario))
    return DiscourseManager(world, random.Random(seed))


def act_seq(text, grammar):
    toks = tokenize(text)
    return extract_acts(parse_chart(toks, grammar), toks)


def seq_of(*acts):
    covered = frozenset(i for a in acts for i in range(a.start, a.end))
    return ActSequence(tuple(acts), covered, 1.0)


# -- rule files ----------------------------------------------------------------

def test_rule_files_load_with_unique_priorities():
    verbal = load_verbal_rules()
    ps = load_ps_rules()
    assert len({r.priority for r in verbal}) == len(verbal)
    assert len({r.priority for r in ps}) == len(ps)
    assert verbal[-1].pattern == {}
    assert ps[-1].pattern == {}


def test_rule_file_validation(tmp_path):
    bad = tmp_path / "rules.json"
    bad.write_text('{"version": 1, "rules": [{"name": "a", "priority": 1, '
                   '"pattern": {}, "action": "nope"}]}')
    with pytest.raises(RuleFormatError):
        load_ps_rules(str(bad))


# -- stack discipline ------------------------------------------------------------

def test_push_then_pop_restores_state():
    state = DiscourseState()
    frame = DiscourseFrame("MOVE_GOAL")
    frame.touch("e1")
    push_segment(state, frame)
    push_segment(state, DiscourseFrame("CHOOSE_ROUTE", ps_status=AWAITING_CLARIFICATION))
    assert len(state.stack) == 2
    pop_segment(state)
    assert state.stack[-1] is frame
    assert state.focused_engine() == "e1"


def test_pop_empty_stack_raises():
    with pytest.raises(IndexError):
        pop_segment(DiscourseState())


def test_focus_sits_at_history_head():
    frame = DiscourseFrame("MOVE_GOAL")
    frame.touch("e1")
    frame.touch("e2")
    assert frame.focus == "e2"
    assert frame.history[0] == "e2"


# -- reference resolution ----------------------------------------------------------

def test_engine_at_city_resolves(grammar):
    m = fresh_manager()
    seq = act_seq("THE ENGINE AT ALBANY NEEDS TO GO TO MILWAUKEE", grammar)
    act = resolve_references(seq.acts[0], m.state, m.world)
    assert act.content["engine_id"] == "e3"


def test_last_train_prefers_unrouted_engine(grammar):
    m = fresh_manager()
    m.world.assign_route("e1", Route(None, ("detroit", "toledo")))
    m.world.assign_route("e2", Route(None, ("montreal", "burlington")))
    seq = act_seq("OKAY NOW LET'S TAKE THE LAST TRAIN AND GO FROM ALBANY TO MILWAUKEE", grammar)
    suggest = next(a for a in seq.acts if a.act_type == "SUGGEST")
    act = resolve_references(suggest, m.state, m.world)
    assert act.content["engine_id"] == "e3"


def test_last_train_falls_back_to_recency(grammar):
    m = fresh_manager()
    # no engine is routed, so "last" is ambiguous; recency breaks the tie
    frame = DiscourseFrame("MOVE_GOAL")
    frame.touch("e2")
    push_segment(m.state, frame)
    act = SpeechAct("SUGGEST", {"type": "MOVE", "engine": {"sel": "last"}}, 0, 1, 1.0)
    got = resolve_references(act, m.state, m.world)
    assert got.content["engine_id"] == "e2"


def test_unresolvable_annotated_not_rejected():
    m = fresh_manager()
    for e in m.world.engines.values():
        e.current_city = "boston"
        e.home_city = "boston"
    act = SpeechAct("SUGGEST", {"type": "MOVE", "engine": {"at": "ATLANTA"}}, 0, 1, 1.0)
    got = resolve_references(act, m.state, m.world)
    assert got.content.get("unresolved") is True
    assert got.act_type == "SUGGEST"


def test_contentless_tells_never_merged():
    m = fresh_manager()
    a1 = SpeechAct("TELL", {}, 0, 0, 0.25)
    a2 = SpeechAct("TELL", {}, 1, 1, 0.25)
    acts = seq_of(a1, a2)
    m.interpret(acts)  # must not throw and must keep both acts distinct
    assert len(acts.acts) == 2


def test_force_refined_upward_when_clarification_pending(grammar):
    m = fresh_manager()
    m.interpret(act_seq("LET'S TAKE A TRAIN FROM DETROIT TO WASHINGTON", grammar))
    assert m.state.pending_clarification is not None
    tell = SpeechAct("TELL", {"type": "MOVE", "via": ["TOLEDO"]}, 0, 2, 0.5)
    got = resolve_references(tell, m.state, m.world)
    assert got.act_type == "SUGGEST"


# -- interpretation --------------------------------------------------------------

def test_confirm_with_empty_stack_has_no_effect(grammar):
    m = fresh_manager()
    before = len(m.state.stack)
    responses = m.interpret(act_seq("OKAY", grammar))
    assert len(m.state.stack) == before
    assert [r.kind for r in responses] == ["ACK"]


def test_garbled_turn_gets_clarification(grammar):
    m = fresh_manager()
    responses = m.interpret(act_seq("FLIBBER JABBER", grammar))
    assert [r.kind for r in responses] == ["PARDON"]


def test_route_suggestion_reaches_solver(grammar):
    m = fresh_manager()
    responses = m.interpret(act_seq("LET'S TAKE A TRAIN FROM DETROIT TO WASHINGTON", grammar))
    assert responses[-1].kind == "CLARIFY_ROUTE"
    assert m.state.stack[-1].kind == "CHOOSE_ROUTE"
    assert m.state.stack[-1].ps_status == AWAITING_CLARIFICATION


def test_clarification_answer_pops_segment(grammar):
    m = fresh_manager()
    m.interpret(act_seq("LET'S TAKE A TRAIN FROM DETROIT TO WASHINGTON", grammar))
    depth = len(m.state.stack)
    responses = m.interpret(act_seq("LET'S GO VIA TOLEDO AND PITTSBURGH", grammar))
    assert responses[-1].kind in ("PROPOSE_ROUTE", "CROSSING")
    assert len(m.state.stack) < depth


def test_confirm_achieves_pending_proposal(grammar):
    m = fresh_manager()
    m.interpret(act_seq("LET'S TAKE A TRAIN FROM DETROIT TO WASHINGTON", grammar))
    m.interpret(act_seq("LET'S GO VIA TOLEDO AND PITTSBURGH", grammar))
    goal = m.state.focused_goal()
    assert goal.state == "proposed"
    m.interpret(act_seq("OKAY", grammar))
    assert goal.state == "confirmed"


def test_interpret_total_over_random_act_sequences(grammar):
    m = fresh_manager()
    rng = random.Random(5)
    types = ["TELL", "CONFIRM", "REJECT", "SUGGEST", "REQUEST",
             "CONFIRM/ACKNOWLEDGE", "QUESTION", "CHECK"]
    contents = [{}, {"type": "MOVE"}, {"type": "MOVE", "dest": "BOSTON"},
                {"type": "VAGUE"}, {"type": "DONE"},
                {"type": "MOVE", "via": ["ALBANY"]},
                {"type": "CLEAR", "route": {"owner": "BOSTON"}}]
    for _ in range(300):
        acts = []
        pos = 0
        for _k in range(rng.randint(0, 3)):
            t = rng.choice(types)
            c = dict(rng.choice(contents))
            if not c and t not in ("TELL", "CONFIRM", "ACKNOWLEDGE",
                                   "CONFIRM/ACKNOWLEDGE", "REJECT"):
                c = {"type": "MOVE"}
            acts.append(SpeechAct(t, c, pos, pos + 1, 1.0))
            pos += 1
        responses = m.interpret(seq_of(*acts))
        assert responses, acts
        assert all(r.kind for r in responses)


def test_strong_commitment_no_pardon_when_specific_rule_fires(grammar):
    m = fresh_manager()
    # content act plus junk: the junk must not trigger the catch-all response
    responses = m.interpret(
        act_seq("LET'S TAKE A TRAIN FROM DETROIT TO WASHINGTON FLIBBER", grammar))
    assert all(r.kind != "PARDON" for r in responses)


def test_priority_determinism(grammar):
    outs = []
    for _ in range(2):
        m = fresh_manager(seed=9)
        r1 = m.interpret(act_seq("LET'S TAKE A TRAIN FROM DETROIT TO WASHINGTON", grammar))
        r2 = m.interpret(act_seq("LET'S GO VIA TOLEDO AND PITTSBURGH", grammar))
        outs.append((r1, r2))
    assert outs[0] == outs[1]


def test_stack_depth_changes_only_via_push_pop(grammar):
    m = fresh_manager()
    # social and vacuous acts leave the stack alone
    for text in ("OKAY", "YES", "NO", "FLIBBER"):
        depth = len(m.state.stack)
        m.interpret(act_seq(text, grammar))
        assert len(m.state.stack) == depth


# -- the correction-reinterpretation scenario ---------------------------------------

def test_correction_branch_replans_around_congestion(grammar):
    from railtalk.world import ScenarioEvent

    m = fresh_manager(seed=3)
    m.interpret(act_seq("OKAY LET'S TAKE A TRAIN FROM DETROIT TO WASHINGTON", grammar))
    m.world.turn_index = 2
    m.world.apply_event(ScenarioEvent(2, "congestion", ("SCRANTON", "BALTIMORE"), 5))
    m.interpret(act_seq("LET'S GO VIA TOLEDO AND PITTSBURGH", grammar))
    e1 = m.world.engines["e1"]
    assert e1.route is not None and e1.current_city == "washington"
    m.world.turn_index = 3
    responses = m.interpret(act_seq("NOW LET'S TAKE THE TRAIN FROM DETROIT TO WASHINGTON", grammar))
    kinds = [r.kind for r in responses]
    assert "CORRECTED_ROUTE" in kinds
    path = set(m.world.engines["e1"].route.path)
    assert "scranton" not in path and "baltimore" not in path
    assert m.world.engines["e1"].route.path[0] == "detroit"
    assert m.world.engines["e1"].route.path[-1] == "washington"
