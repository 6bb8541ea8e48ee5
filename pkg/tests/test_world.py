import pytest

from railtalk.world import (Route, ScenarioEvent, WorldFormatError, load_map,
                            load_scenario, world_for_scenario)


@pytest.fixture()
def world():
    return world_for_scenario(load_scenario("three-trains"))


def test_map_loads_and_is_connected(world):
    assert len(world.cities) == 22
    assert all(world.adjacency[c] for c in world.cities)


def test_engines_placed(world):
    assert world.engines["e1"].current_city == "detroit"
    assert world.engines["e2"].current_city == "montreal"
    assert world.engines["e3"].current_city == "albany"


def test_route_hours_base(world):
    r = Route("e1", ("detroit", "toledo", "pittsburgh"))
    assert world.route_hours(r) == 2.0


def test_congestion_adds_exactly_five(world):
    r = Route("e1", ("detroit", "toledo", "pittsburgh", "scranton"))
    base = world.route_hours(r)
    world.apply_event(ScenarioEvent(1, "congestion", ("SCRANTON",), 5))
    assert world.route_hours(r) == base + 5


def test_congestion_counts_every_path_city_including_endpoints(world):
    r = Route("e1", ("detroit", "toledo"))
    base = world.route_hours(r)
    world.apply_event(ScenarioEvent(1, "congestion", ("DETROIT",), 5))
    assert world.route_hours(r) == base + 5


def test_congestion_off_route_changes_nothing(world):
    world.assign_route("e1", Route(None, ("detroit", "toledo", "pittsburgh")))
    before = world.score_solution().total_hours
    world.apply_event(ScenarioEvent(1, "congestion", ("BOSTON",), 5))
    assert world.score_solution().total_hours == before


def test_event_idempotent(world):
    ev = ScenarioEvent(1, "congestion", ("SCRANTON",), 5)
    world.apply_event(ev)
    world.apply_event(ev)
    assert world.congested["scranton"][0] == 5.0


def test_event_unknown_city_rejected(world):
    with pytest.raises(KeyError):
        world.apply_event(ScenarioEvent(1, "congestion", ("GOTHAM",), 5))


def test_crossing_routes_gain_five_each(world):
    world.assign_route("e1", Route(None, ("detroit", "toledo", "cincinnati")))
    world.assign_route("e2", Route(None, ("montreal", "toronto", "detroit", "toledo")))
    # shared cities: detroit and toledo -> two crossings each
    r1 = world.engines["e1"].route
    r2 = world.engines["e2"].route
    assert world.route_hours(r1) == 2 + 2 * world.cross_penalty_hours
    assert world.route_hours(r2) == 3 + 2 * world.cross_penalty_hours


def test_single_crossing_city(world):
    world.assign_route("e1", Route(None, ("detroit", "toledo")))
    world.assign_route("e2", Route(None, ("chicago", "detroit")))
    assert world.route_hours(world.engines["e1"].route) == 1 + 5
    assert world.route_hours(world.engines["e2"].route) == 1 + 5


def test_score_solution_incomplete_marker(world):
    report = world.score_solution()
    assert report.total_hours == 0
    assert not report.complete
    assert report.marker() == "INCOMPLETE"


def test_score_additivity(world):
    world.assign_route("e1", Route(None, ("detroit", "toledo", "cincinnati", "lexington")))
    world.assign_route("e2", Route(None, ("montreal", "burlington", "albany")))
    total = world.score_solution().total_hours
    parts = sum(world.route_hours(e.route) for e in world.engines.values() if e.route)
    assert total == parts


def test_clear_route_returns_engine(world):
    world.assign_route("e1", Route(None, ("detroit", "toledo")))
    assert world.engines["e1"].current_city == "toledo"
    world.clear_route("e1")
    assert world.engines["e1"].current_city == "detroit"
    assert world.engines["e1"].route is None


def test_scenario_goal_count_validated(tmp_path):
    bad = tmp_path / "scenario_bad.json"
    bad.write_text('{"version": 1, "name": "bad", "engines": [{"id": "e1", "city": "DETROIT"}], '
                   '"goals": ["BOSTON", "ALBANY"], "events": []}')
    with pytest.raises(WorldFormatError):
        load_scenario(str(bad))


def test_snapshot_stable(world):
    a = world.snapshot()
    b = world.snapshot()
    assert a == b
    world.assign_route("e1", Route(None, ("detroit", "toledo")))
    assert world.snapshot() != a
