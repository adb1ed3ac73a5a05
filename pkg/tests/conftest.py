import numpy as np
import pytest
from hypothesis import settings

from lstring.lattice import Loop, LoopSequence, edge, loop_sequence

settings.register_profile("default", deadline=None)
settings.load_profile("default")

P_WORD = "@(0,0) +1 +2 -1 -2"
DW_WORD = "@(0,0) +1 +2 -1 -2 +1 +2 -1 -2"

ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE, key=lambda t: t[0]):
        terminalreporter.write_line(line[1])


@pytest.fixture(scope="session")
def p():
    return loop_sequence(P_WORD)[0]


@pytest.fixture(scope="session")
def small_sequences():
    """(p), (p,p), (p,p^-1) and the double-wound square."""
    p = loop_sequence(P_WORD)[0]
    return {
        "p": LoopSequence([p]),
        "pp": LoopSequence([p, p]),
        "ppinv": LoopSequence([p, p.inverse()]),
        "dw": loop_sequence(DW_WORD),
    }


def random_closed_walk(rng: np.random.Generator, d: int, n: int, box: int = 2) -> list:
    """Random walk of ``n`` steps inside [-box, box]^d, closed by a random return path."""
    pos = [0] * d
    path = []

    def step(axis, sign):
        path.append(edge(tuple(pos), axis, sign))
        pos[axis - 1] += sign

    for _ in range(n):
        axis = int(rng.integers(1, d + 1))
        sign = 1 if rng.random() < 0.5 else -1
        if abs(pos[axis - 1] + sign) > box:
            sign = -sign
        step(axis, sign)
    moves = [(j + 1, -1 if pos[j] > 0 else 1) for j in range(d) for _ in range(abs(pos[j]))]
    for k in rng.permutation(len(moves)):
        step(*moves[k])
    return path


def random_loop(rng: np.random.Generator, d: int = 2, n_max: int = 8, box: int = 1) -> Loop:
    while True:
        l = Loop.from_path(random_closed_walk(rng, d, int(rng.integers(2, n_max + 1)), box))
        if l.codes:
            return l


def random_sequence(rng: np.random.Generator, d: int = 2, n_loops: int = 2, n_max: int = 8, box: int = 1) -> LoopSequence:
    return LoopSequence([random_loop(rng, d, n_max, box) for _ in range(int(rng.integers(1, n_loops + 1)))])
