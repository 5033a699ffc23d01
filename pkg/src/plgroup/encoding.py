"""Break-point coordinates for maps with n breaks, and a sampling experiment.

A map with ``n`` breaks is identified with the tuple of its break points in
``(0,1)^2``. Tuples are only valid when coordinates increase and no three
consecutive nodes (with ``(0,0)`` and ``(1,1)`` appended) are collinear.

Randomness: every sampling call derives its own generator from
``numpy.random.SeedSequence(seed, spawn_key=(stream,))``. Trial ``i`` of an
experiment uses ``stream = i``, so trials are independent and reproducible in
any order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidTuple, PLGroupError
from .pl_core import PLMap, Point, compose

MAX_REJECTIONS = 10_000


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 0
    denominator_bound: int = 10**6
    trials: int = 1000

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.denominator_bound < 2:
            raise ValueError("denominator_bound must be >= 2")


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    # SeedSequence needs non-negative entropy; fold signed 64-bit seeds
    ss = np.random.SeedSequence(seed & 0xFFFF_FFFF_FFFF_FFFF, spawn_key=(stream,))
    return np.random.default_rng(ss)


def validate_tuple(points: Sequence) -> bool:
    try:
        PLMap(tuple(points))
    except (PLGroupError, TypeError, ValueError):
        return False
    return True


def encode(f: PLMap) -> tuple:
    return f.breaks


def decode(points: Sequence) -> PLMap:
    try:
        return PLMap(tuple(points))
    except PLGroupError as exc:
        raise InvalidTuple(str(exc)) from exc


def random_fraction(rng: np.random.Generator, bound: int) -> Fraction:
    """``p/q`` with ``q`` uniform on ``[2, bound]`` and ``p`` uniform on ``[1, q-1]``."""
    q = int(rng.integers(2, bound, endpoint=True))
    p = int(rng.integers(1, q - 1, endpoint=True))
    return Fraction(p, q)


def random_map(n: int, rng: np.random.Generator, bound: int) -> PLMap:
    """A map with exactly ``n`` breaks; invalid draws are rejected and redrawn."""
    if n == 0:
        return PLMap.identity()
    for _ in range(MAX_REJECTIONS):
        xs = {random_fraction(rng, bound) for _ in range(n)}
        ys = {random_fraction(rng, bound) for _ in range(n)}
        if len(xs) < n or len(ys) < n:
            continue
        pts = tuple(Point(x, y) for x, y in zip(sorted(xs), sorted(ys)))
        if validate_tuple(pts):
            return PLMap(pts)
    raise ValueError(f"could not draw a {n}-break map with denominators <= {bound}")


def sample_An(n: int, cfg: SampleConfig, stream: int = 0) -> PLMap:
    return random_map(n, rng_for(cfg.seed, stream), cfg.denominator_bound)


@dataclass(frozen=True)
class DeficientTrial:
    trial: int
    g: PLMap
    breaks: int


@dataclass
class CategoryReport:
    n: int
    m: int
    trials: int
    maximal_count: int
    deficient: list = field(default_factory=list)

    @property
    def fraction_maximal(self) -> Fraction:
        return Fraction(self.maximal_count, self.trials)


def collisions(f: PLMap, g: PLMap) -> list:
    """Break points ``x0`` of ``g`` whose image is a break point of ``f``."""
    fb = {p.x for p in f.breaks}
    return [p.x for p in g.breaks if p.y in fb]


def category_experiment(
    f: PLMap, m: int, cfg: SampleConfig, injected: Optional[Sequence[PLMap]] = None
) -> CategoryReport:
    """Count sampled ``g`` with ``m`` breaks for which ``f o g`` has all ``n + m`` breaks.

    ``injected`` maps are appended as extra trials after the random ones.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    n = f.num_breaks
    gs = [sample_An(m, cfg, stream=i) for i in range(cfg.trials)]
    for g in injected or ():
        if g.num_breaks != m:
            raise ValueError(f"injected map has {g.num_breaks} breaks, expected {m}")
        gs.append(g)
    report = CategoryReport(n=n, m=m, trials=len(gs), maximal_count=0)
    for i, g in enumerate(gs):
        k = compose(f, g).num_breaks
        if k == n + m:
            report.maximal_count += 1
        else:
            report.deficient.append(DeficientTrial(i, g, k))
    return report


def deficiency_explained(f: PLMap, g: PLMap) -> bool:
    """Check that a deficient ``g`` is explained by a break collision.

    A product with fewer than ``n + m`` breaks needs some break of ``g`` to
    land on a break of ``f``.
    """
    deficient = compose(f, g).num_breaks < f.num_breaks + g.num_breaks
    return deficient and bool(collisions(f, g))
