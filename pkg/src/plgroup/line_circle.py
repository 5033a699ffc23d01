"""PL homeomorphisms of the line and of the circle ``R / 2Z``.

Line maps have finitely many breaks and affine tails. Circle maps are lifts
satisfying ``f(x + 2) = f(x) + 2``; they are stored by their nodes in one
period ``[0, 2)``. In both cases a map without breaks keeps a single anchor
node at ``x = 0`` so that translations are representable.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Optional

from .encoding import SampleConfig, rng_for
from .pl_core import Interval, PLMap, Point, Q

PERIOD = Fraction(2)


def _slope(p: Point, q: Point) -> Fraction:
    return (q.y - p.y) / (q.x - p.x)


@dataclass(frozen=True)
class LineMap:
    nodes: tuple
    left_slope: Fraction = Fraction(1)
    right_slope: Fraction = Fraction(1)

    def __post_init__(self):
        pts = tuple(Point.of(*p) for p in self.nodes)
        object.__setattr__(self, "nodes", pts)
        object.__setattr__(self, "left_slope", Q(self.left_slope))
        object.__setattr__(self, "right_slope", Q(self.right_slope))
        if not pts:
            raise ValueError("a line map needs at least one node")
        if self.left_slope <= 0 or self.right_slope <= 0:
            raise ValueError("tail slopes must be positive")
        if any(not (a.x < b.x and a.y < b.y) for a, b in zip(pts, pts[1:])):
            raise ValueError("nodes must increase strictly")

    @classmethod
    def identity(cls) -> "LineMap":
        return cls((Point(Fraction(0), Fraction(0)),))

    @classmethod
    def translation(cls, c) -> "LineMap":
        return cls((Point(Fraction(0), Q(c)),))

    @classmethod
    def canonical(cls, nodes, left_slope, right_slope) -> "LineMap":
        """Drop nodes where the slope does not change; keep an anchor if none remain."""
        pts = sorted({Point.of(*p) for p in nodes})
        kept = []
        for i, p in enumerate(pts):
            left = left_slope if i == 0 else _slope(pts[i - 1], p)
            right = right_slope if i == len(pts) - 1 else _slope(p, pts[i + 1])
            if left != right:
                kept.append(p)
        if not kept:
            anchor = cls(tuple(pts), left_slope, right_slope)
            kept = [Point(Fraction(0), anchor(0))]
        return cls(tuple(kept), left_slope, right_slope)

    @property
    def breaks(self) -> tuple:
        if len(self.nodes) == 1 and self.left_slope == self.right_slope:
            return ()
        return self.nodes

    def __call__(self, x) -> Fraction:
        x = Q(x)
        first, last = self.nodes[0], self.nodes[-1]
        if x <= first.x:
            return first.y + self.left_slope * (x - first.x)
        if x >= last.x:
            return last.y + self.right_slope * (x - last.x)
        xs = [p.x for p in self.nodes]
        i = bisect_right(xs, x) - 1
        p, q = self.nodes[i], self.nodes[i + 1]
        return p.y + _slope(p, q) * (x - p.x)

    def is_identity(self) -> bool:
        return self == LineMap.identity()


def invert_line(f: LineMap) -> LineMap:
    return LineMap(tuple(p.swapped() for p in f.nodes), 1 / f.left_slope, 1 / f.right_slope)


def compose_line(f: LineMap, g: LineMap) -> LineMap:
    """``f o g``; candidate breaks are ``B(g)`` and ``g^-1(B(f))``."""
    g_inv = invert_line(g)
    cands = {p.x for p in g.nodes} | {g_inv(p.x) for p in f.nodes}
    return LineMap.canonical(
        ((c, f(g(c))) for c in cands),
        f.left_slope * g.left_slope,
        f.right_slope * g.right_slope,
    )


def embed_interval(f: PLMap) -> LineMap:
    """``f`` on [0, 1], the identity elsewhere."""
    return LineMap.canonical(f.nodes, 1, 1)


def bump_line(U: Interval) -> LineMap:
    a, b = U.lo, U.hi
    m = (a + b) / 2
    return LineMap(((a, a), (m, m + (b - a) / 8), (b, b)))


def line_support(f: LineMap) -> list:
    """Maximal open intervals moved by ``f``; ``None`` marks an infinite end."""
    zeros = set()
    nodes = f.nodes
    for p in nodes:
        if p.y == p.x:
            zeros.add(p.x)
    for p, q in zip(nodes, nodes[1:]):
        dp, dq = p.y - p.x, q.y - q.x
        if dp * dq < 0:
            zeros.add(p.x + dp / (dp - dq) * (q.x - p.x))
    first, last = nodes[0], nodes[-1]
    # tails: f(x) - x = d + (s - 1)(x - x0)
    for node, s, on_left in ((first, f.left_slope, True), (last, f.right_slope, False)):
        d = node.y - node.x
        if s != 1 and d != 0:
            root = node.x - d / (s - 1)
            if (root < node.x) if on_left else (root > node.x):
                zeros.add(root)
    pts = sorted(zeros)
    bounds = [None] + pts + [None]
    out = []
    for lo, hi in zip(bounds, bounds[1:]):
        if lo is None and hi is None:
            probe = Fraction(0)
        elif lo is None:
            probe = hi - 1
        elif hi is None:
            probe = lo + 1
        else:
            probe = (lo + hi) / 2
        if f(probe) != probe:
            out.append((lo, hi))
    return out


# -- circle ------------------------------------------------------------------


@dataclass(frozen=True)
class CircleMap:
    """Lift of a circle map, stored by its nodes in one period ``[0, 2)``."""

    nodes: tuple

    def __post_init__(self):
        pts = tuple(Point.of(*p) for p in self.nodes)
        object.__setattr__(self, "nodes", pts)
        if not pts:
            raise ValueError("a circle map needs at least one node")
        if any(not 0 <= p.x < PERIOD for p in pts):
            raise ValueError("node abscissae must lie in [0, 2)")
        if any(not (a.x < b.x and a.y < b.y) for a, b in zip(pts, pts[1:])):
            raise ValueError("nodes must increase strictly")
        if not pts[-1].y < pts[0].y + PERIOD:
            raise ValueError("one period of nodes must rise by less than 2")

    @classmethod
    def identity(cls) -> "CircleMap":
        return cls((Point(Fraction(0), Fraction(0)),))

    @classmethod
    def translation(cls, c) -> "CircleMap":
        return cls((Point(Fraction(0), Q(c)),))

    @classmethod
    def canonical(cls, nodes) -> "CircleMap":
        pts = sorted({_reduce(Point.of(*p)) for p in nodes})
        m = len(pts)
        kept = []
        for i, p in enumerate(pts):
            prev = pts[i - 1] if i else _shift(pts[-1], -1)
            nxt = pts[i + 1] if i < m - 1 else _shift(pts[0], 1)
            if _slope(prev, p) != _slope(p, nxt):
                kept.append(p)
        if not kept:
            kept = [Point(Fraction(0), cls(tuple(pts))(0))]
        return cls(tuple(kept))

    @property
    def breaks(self) -> tuple:
        if len(self.nodes) == 1:
            return ()
        return self.nodes

    def _window(self) -> list:
        return [_shift(self.nodes[-1], -1), *self.nodes, _shift(self.nodes[0], 1)]

    def __call__(self, x) -> Fraction:
        x = Q(x)
        k = floor(x / PERIOD)
        r = x - k * PERIOD
        win = self._window()
        xs = [p.x for p in win]
        i = bisect_right(xs, r) - 1
        p, q = win[i], win[i + 1]
        return p.y + _slope(p, q) * (r - p.x) + k * PERIOD

    def unroll(self, periods: int = 2) -> LineMap:
        """Line map agreeing with this lift on ``[-2*periods, 2*periods]``."""
        nodes = [_shift(p, j) for j in range(-periods - 1, periods + 1) for p in self.nodes]
        nodes = sorted(nodes)
        s_left = _slope(nodes[0], nodes[1]) if len(nodes) > 1 else Fraction(1)
        s_right = _slope(nodes[-2], nodes[-1]) if len(nodes) > 1 else Fraction(1)
        return LineMap.canonical(nodes, s_left, s_right)


def _shift(p: Point, periods: int) -> Point:
    return Point(p.x + periods * PERIOD, p.y + periods * PERIOD)


def _reduce(p: Point) -> Point:
    return _shift(p, -floor(p.x / PERIOD))


def invert_circle(f: CircleMap) -> CircleMap:
    return CircleMap.canonical(p.swapped() for p in f.nodes)


def compose_circle(f: CircleMap, g: CircleMap) -> CircleMap:
    g_inv = invert_circle(g)
    g0 = g(0)
    cands = {p.x for p in g.nodes}
    for p in f.nodes:
        # the representative of p.x + 2Z inside g([0, 2)) = [g(0), g(0) + 2)
        v = p.x + PERIOD * ceil((g0 - p.x) / PERIOD)
        cands.add(g_inv(v))
    return CircleMap.canonical((c, f(g(c))) for c in cands)


def embed_circle(f: PLMap) -> CircleMap:
    return CircleMap.canonical(f.nodes)


def periodic_bump(U: Interval) -> CircleMap:
    if not (0 <= U.lo and U.hi <= PERIOD):
        raise ValueError("bump interval must lie in one period")
    m = U.midpoint
    return CircleMap.canonical(((U.lo, U.lo), (m, m + U.length / 8), (U.hi, U.hi)))


def is_periodic(f: LineMap, window) -> bool:
    """``f(x + 2) == f(x) + 2`` at every node and midpoint of ``window`` (an interval of length >= 2)."""
    lo, hi = Q(window[0]), Q(window[1]) - PERIOD
    pts = {lo, hi} | {p.x for p in f.nodes if lo <= p.x <= hi} | {p.x - PERIOD for p in f.nodes if lo <= p.x - PERIOD <= hi}
    ordered = sorted(pts)
    pts |= {(a + b) / 2 for a, b in zip(ordered, ordered[1:])}
    return all(f(x + PERIOD) == f(x) + PERIOD for x in pts)


# -- centralizer probe -------------------------------------------------------


@dataclass(frozen=True)
class CentralizerWitness:
    g_support: Interval
    z: Fraction
    left: Fraction
    right: Fraction


@dataclass(frozen=True)
class CentralizerProbe:
    commutes: bool
    probes: int
    witness: Optional[CentralizerWitness] = None


def _point_outside_unit(lo, hi) -> Optional[Fraction]:
    """A point of ``(lo, hi)`` (``None`` = infinite end) lying outside [0, 1]."""
    zero, one = Fraction(0), Fraction(1)
    top = zero if hi is None else min(hi, zero)
    if lo is None or lo < top:
        return top - 1 if lo is None else (lo + top) / 2
    bottom = one if lo is None else max(lo, one)
    if hi is None or bottom < hi:
        return bottom + 1 if hi is None else (bottom + hi) / 2
    return None


def _line_witness(h: LineMap) -> Optional[CentralizerWitness]:
    """Bump outside [0, 1] that ``h`` fails to commute with, if ``h`` moves such a point."""
    x = None
    for lo, hi in line_support(h):
        x = _point_outside_unit(lo, hi)
        if x is not None:
            break
    if x is None:
        return None
    y = h(x)
    delta = abs(y - x) / 4
    h_inv = invert_line(h)
    lo = max(x - delta, h_inv(y - delta))
    hi = min(x + delta, h_inv(y + delta))
    lo, hi = (lo, min(hi, Fraction(0))) if x < 0 else (max(lo, Fraction(1)), hi)
    W = Interval(lo, hi)
    g = bump_line(W)
    z = W.midpoint
    return CentralizerWitness(W, z, h(g(z)), g(h(z)))


def _circle_witness(h: CircleMap) -> Optional[CentralizerWitness]:
    """Periodic bump inside (1, 2) not commuting with ``h``.

    Needs a point ``x`` in (1, 2) with ``h(x) - x`` not in ``2Z``; the level
    sets of ``h(x) - x`` on each linear piece are solved exactly.
    """
    one, two = Fraction(1), PERIOD
    pts = {one, two} | {p.x for p in h.nodes if one < p.x < two}
    ordered = sorted(pts)
    cuts = set(ordered)
    for a, b in zip(ordered, ordered[1:]):
        da, db = h(a) - a, h(b) - b
        lo, hi = sorted((da, db))
        for e in range(ceil(lo / 2), floor(hi / 2) + 1):
            if da != db:
                cuts.add(a + (2 * e - da) / (db - da) * (b - a))
    cuts = sorted(cuts)
    for a, b in zip(cuts, cuts[1:]):
        x = (a + b) / 2
        d = h(x) - x
        if d % PERIOD != 0:
            gap = min(d % PERIOD, PERIOD - d % PERIOD)
            delta = gap / 4
            h_inv = invert_circle(h)
            y = h(x)
            W = Interval(
                max(x - delta, h_inv(y - delta), one),
                min(x + delta, h_inv(y + delta), two),
            )
            g = periodic_bump(W)
            z = W.midpoint
            return CentralizerWitness(W, z, h(g(z)), g(h(z)))
    return None


def _disagreement(h, g) -> Fraction:
    """A point where ``h o g`` and ``g o h`` differ, given that they do."""
    compose_ = compose_circle if isinstance(h, CircleMap) else compose_line
    a, b = compose_(h, g), compose_(g, h)
    xs = sorted({p.x for p in a.nodes} | {p.x for p in b.nodes})
    xs = [xs[0] - 1, *xs, xs[-1] + 1]
    for x in xs:
        if a(x) != b(x):
            return x
    raise AssertionError("maps agree at every node")


def centralizer_membership_probe(h, cfg: SampleConfig, probes: int = 50) -> CentralizerProbe:
    """Commutation of ``h`` with maps fixing [0, 1], sampled then guided.

    Samples bumps on rational subintervals of (-4, 0) and (1, 5) for line
    maps, and periodic bumps inside (1, 2) for circle maps.
    """
    rng = rng_for(cfg.seed, stream=0)
    circle = isinstance(h, CircleMap)
    for _ in range(probes):
        if circle:
            base = Fraction(1)
        else:
            base = Fraction(-4) if rng.integers(2) == 0 else Fraction(1)
        i, j = sorted(int(v) for v in rng.choice(65, size=2, replace=False))
        width = Fraction(1 if circle else 4, 64)
        U = Interval(base + i * width, base + j * width)
        if circle:
            g = periodic_bump(U)
            same = compose_circle(h, g) == compose_circle(g, h)
        else:
            g = bump_line(U)
            same = compose_line(h, g) == compose_line(g, h)
        if not same:
            z = _disagreement(h, g)
            return CentralizerProbe(False, probes, CentralizerWitness(U, z, h(g(z)), g(h(z))))
    witness = _circle_witness(h) if circle else _line_witness(h)
    if witness is not None:
        assert witness.left != witness.right
    return CentralizerProbe(witness is None, probes, witness)
