import json

import pytest

from arrchess.engine import EngineConfig, stub_engine_argv
from oracles.synthetic_pgn import build_archive


@pytest.fixture(scope="session")
def small_archive():
    return build_archive(1000, seed=11, pool=20)


@pytest.fixture
def stub(tmp_path):
    """Factory: EngineConfig for the scripted engine with the given script keys."""
    counter = [0]

    def make(depth: int = 2, **script) -> EngineConfig:
        counter[0] += 1
        path = tmp_path / f"script{counter[0]}.json"
        path.write_text(json.dumps(script))
        return EngineConfig(stub_engine_argv(str(path)), depth=depth, handshake_timeout_ms=10_000, search_timeout_ms=10_000)

    return make


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance")
        for line in RESULTS:
            terminalreporter.write_line(line)
