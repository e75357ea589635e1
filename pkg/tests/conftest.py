import itertools

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from covchain.ideals import OMEGA, DownSet, downset_canonicalize, downset_contains, ideal, upset_minimize
from covchain.models import AffineNet, AffineTransition, Vas, vas_to_affine

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

HALVING = Vas(2, ((-2, 1),))
HALVING_NET = vas_to_affine(HALVING)
TRANSFER_NET = AffineNet(2, (AffineTransition((0, 0), ((1, 1), (0, 0)), (0, 0)),))
DOUBLING_NET = AffineNet(2, (AffineTransition((0, 0), ((1, 1), (2, 0)), (0, 0)),))

HALVING_CHAIN = [
    [(OMEGA, 4)],
    [(1, 4), (OMEGA, 3)],
    [(1, 4), (3, 3), (OMEGA, 2)],
    [(1, 4), (3, 3), (5, 2), (OMEGA, 1)],
    [(1, 4), (3, 3), (5, 2), (7, 1), (OMEGA, 0)],
    [(1, 4), (3, 3), (5, 2), (7, 1), (9, 0)],
]


@pytest.fixture
def halving_downsets():
    return [downset_canonicalize(D, 2) for D in HALVING_CHAIN]


def grid(d, hi):
    return itertools.product(range(hi + 1), repeat=d)


def members(D: DownSet, hi: int) -> set:
    return {v for v in grid(D.dim, hi) if downset_contains(D, v)}


def omega_comp(max_value):
    return st.one_of(st.integers(0, max_value), st.just(OMEGA))


@st.composite
def ideals_of(draw, d, max_value=4):
    return ideal(*[draw(omega_comp(max_value)) for _ in range(d)])


@st.composite
def downsets(draw, min_dim=1, max_dim=3, max_value=4, max_ideals=4):
    d = draw(st.integers(min_dim, max_dim))
    ids = draw(st.lists(ideals_of(d, max_value), max_size=max_ideals))
    return downset_canonicalize(ids, d)


@st.composite
def upsets(draw, min_dim=1, max_dim=3, max_value=4, max_size=4):
    d = draw(st.integers(min_dim, max_dim))
    vs = draw(st.lists(st.tuples(*[st.integers(0, max_value)] * d), max_size=max_size))
    return upset_minimize(vs, d)


@st.composite
def affine_transitions(draw, d, max_entry=2, max_shift=2):
    a = tuple(draw(st.integers(0, max_shift)) for _ in range(d))
    b = tuple(draw(st.integers(0, max_shift)) for _ in range(d))
    M = tuple(tuple(draw(st.integers(0, max_entry)) for _ in range(d)) for _ in range(d))
    return AffineTransition(a, M, b)
