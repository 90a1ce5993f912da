import random
from functools import lru_cache

import pytest

from vdgv.field2k import default_field
from vdgv.heisenberg import find_lagrangian
from vdgv.skewpoly import LinPoly

ACCEPTANCE_LINES = []


def random_linpoly(rng, ctx, e):
    return LinPoly(ctx, [rng.randrange(ctx.q) for _ in range(e)] + [rng.randrange(1, ctx.q)])


def random_instances(count, seed=0, shapes=((2, 1, 1), (3, 1, 1), (4, 1, 2), (4, 2, 1),
                                            (6, 1, 2), (6, 2, 1), (6, 3, 1), (8, 1, 2))):
    """(R, A_bar) pairs with a rational Lagrangian; shapes are (k, f0, e)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k, f0, e = rng.choice(shapes)
        ctx = default_field(k, f0)
        R = random_linpoly(rng, ctx, e)
        A = find_lagrangian(R)
        if A is not None:
            out.append((R, A))
    return out


@lru_cache(maxsize=None)
def cached_instances(count, seed=0):
    return tuple(random_instances(count, seed))


@pytest.fixture(scope="session")
def instances():
    return cached_instances(24, 11)


@pytest.fixture
def F4():
    return default_field(2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
