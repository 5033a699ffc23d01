from fractions import Fraction

import pytest
from hypothesis import strategies as st

from plgroup.encoding import SampleConfig, random_map, rng_for
from plgroup.pl_core import PLMap


def interp(nodes, x):
    """Independent evaluator: linear interpolation through explicit nodes."""
    x = Fraction(x)
    for (x0, y0), (x1, y1) in zip(nodes, nodes[1:]):
        if x0 <= x <= x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    raise ValueError(x)


def full_nodes(breaks):
    return [(Fraction(0), Fraction(0))] + [(Fraction(a), Fraction(b)) for a, b in breaks] + [(Fraction(1), Fraction(1))]


def grid(*maps, extra=()):
    """Break coordinates of every map, their preimages and midpoints between them."""
    pts = {Fraction(0), Fraction(1), *map(Fraction, extra)}
    for f in maps:
        for x, y in f.breaks:
            pts.update((x, y))
    pts = sorted(pts)
    pts += [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(pts))


unit_rationals = st.builds(
    lambda q, p: Fraction(p % (q - 1) + 1, q),
    st.integers(min_value=2, max_value=60),
    st.integers(min_value=0, max_value=10**6),
)


@st.composite
def pl_maps(draw, max_breaks=4):
    k = draw(st.integers(min_value=0, max_value=max_breaks))
    xs = sorted(draw(st.sets(unit_rationals, min_size=k, max_size=k)))
    ys = sorted(draw(st.sets(unit_rationals, min_size=k, max_size=k)))
    return PLMap.from_nodes(list(zip(xs, ys)))


@st.composite
def sub_intervals(draw, lo=Fraction(0), hi=Fraction(1)):
    a, b = sorted(draw(st.sets(st.integers(min_value=0, max_value=64), min_size=2, max_size=2)))
    step = (hi - lo) / 64
    return lo + a * step, lo + b * step


@pytest.fixture
def random_maps():
    def make(count, max_breaks, seed=0, bound=10**6):
        out = []
        for i in range(count):
            rng = rng_for(seed, i)
            out.append(random_map(int(rng.integers(0, max_breaks, endpoint=True)), rng, bound))
        return out

    return make


@pytest.fixture
def cfg():
    return SampleConfig(seed=0, trials=200)
