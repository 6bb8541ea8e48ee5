import pytest

from railtalk.channel import train_channel
from railtalk.corpora import recognizer_pairs, training_pairs
from railtalk.lm import train_lm
from railtalk.textnorm import Utterance

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    ACCEPTANCE_LINES.append(f"ACCEPTANCE PASS: {name}{suffix}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixture_pairs():
    return training_pairs()


@pytest.fixture(scope="session")
def fixture_lm(fixture_pairs):
    return train_lm([Utterance(p.ref) for p in fixture_pairs])


@pytest.fixture(scope="session")
def fixture_channel(fixture_pairs):
    return train_channel(fixture_pairs)


@pytest.fixture(scope="session")
def appendix_pairs():
    return recognizer_pairs()
