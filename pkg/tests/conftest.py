import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from hopspan.graph import Graph, random_graph  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} {detail}")


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[c]
        terminalreporter.write_line(f"criterion {c:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@st.composite
def graphs(draw, min_n=1, max_n=14, weighted=True, max_w=9):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    if weighted:
        ws = draw(st.lists(st.integers(1, max_w), min_size=len(chosen), max_size=len(chosen)))
    else:
        ws = [1] * len(chosen)
    return Graph(n, [(u, v, w) for (u, v), w in zip(chosen, ws)])


def path_graph(n, w=1):
    return Graph(n, [(i, i + 1, w) for i in range(n - 1)])


def complete_graph(n, w=1):
    return Graph(n, [(u, v, w) for u in range(n) for v in range(u + 1, n)])


def weighted_corpus(count=50, seed=2024):
    """Random weighted graphs with n in [50, 200], m <= 5n and weights in [1, 20]."""
    import numpy as np

    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(50, 201))
        m = int(rng.integers(n, 5 * n + 1))
        # every fifth graph may be disconnected
        out.append(random_graph(n, m, seed * 1000 + i, weighted=True, wmax=20, connected=i % 5 != 0))
    return out


def unweighted_corpus(count=30, seed=77):
    import numpy as np

    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(40, 201))
        m = int(rng.integers(n, 4 * n + 1))
        out.append(random_graph(n, m, seed * 1000 + i, weighted=False, connected=i % 5 != 0))
    return out
