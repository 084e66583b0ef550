from __future__ import annotations

import pytest
from hypothesis import settings

from scl.geometry import Polytope

settings.register_profile("scl", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("scl")


def interval(a, b) -> Polytope:
    return Polytope.make("E1", [[(a,), (b,)]])


def square(x=0, y=0, s=1) -> Polytope:
    return Polytope.make("E2", [[(x, y), (x + s, y), (x + s, y + s)], [(x, y), (x + s, y + s), (x, y + s)]])


def triangle(*pts) -> Polytope:
    return Polytope.make("E2", [pts])


@pytest.fixture
def unit_square() -> Polytope:
    return square()
