import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from nilcert.algebra import AlgebraContext, TruncatedPoly, Unit

settings.register_profile("repo", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("repo")


def small_fracs():
    return st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, ctx, min_len=0):
    words = [w for w in ctx.all_words if len(w) >= min_len]
    chosen = draw(st.lists(st.sampled_from(words), max_size=6)) if words else []
    return TruncatedPoly(ctx, {w: draw(small_fracs()) for w in chosen})


@st.composite
def units(draw, ctx):
    p = draw(polys(ctx, min_len=1))
    return Unit.from_poly(ctx.one() + p)


def random_unit(ctx, rng, terms=5, min_len=1):
    words = [w for w in ctx.all_words if len(w) >= min_len]
    coeffs = {(): 1}
    for _ in range(terms):
        coeffs[rng.choice(words)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return Unit(ctx, coeffs)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def ctx22():
    return AlgebraContext(2, 2)


# acceptance lines, repeated at the end of the run
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
