"""Exact computations in the group of increasing PL homeomorphisms of [0, 1]."""

from .pl_core import (
    Interval,
    PLMap,
    Point,
    Q,
    bilipschitz_constant,
    break_points,
    compose,
    compose_all,
    evaluate,
    invert,
    make_pl,
    max_slope,
    slope_ratio,
    support,
)

__version__ = "0.1.0"
