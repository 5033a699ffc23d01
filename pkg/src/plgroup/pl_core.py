"""Exact piecewise-linear homeomorphisms of the unit interval.

A map is stored canonically as the ordered tuple of its break points
``(x, f(x))``; the virtual nodes ``(0, 0)`` and ``(1, 1)`` are implicit.
All arithmetic is done with :class:`fractions.Fraction`.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import CollinearBreak, DegenerateInterval, NonMonotone, OutOfDomain

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would smuggle rounding into exact code.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(Q(x), Q(y))

    def swapped(self) -> "Point":
        return Point(self.y, self.x)


def collinear(p: Point, q: Point, r: Point) -> bool:
    return (q.y - p.y) * (r.x - q.x) == (r.y - q.y) * (q.x - p.x)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", Q(self.lo))
        object.__setattr__(self, "hi", Q(self.hi))
        if not self.lo < self.hi:
            raise DegenerateInterval(f"need lo < hi, got ({self.lo}, {self.hi})")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def closure(self) -> "Interval":
        return Interval(self.lo, self.hi, False, False)

    def __contains__(self, x) -> bool:
        x = Q(x)
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above and below

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        """Intersection of two open intervals; ``None`` when empty."""
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo < hi:
            return Interval(lo, hi)
        return None

    def __str__(self):
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class PLMap:
    """Increasing PL self-homeomorphism of [0, 1] in canonical form.

    ``breaks`` lists every point where the slope changes, and nothing else.
    Construction validates both conditions: coordinates strictly increasing
    (including the virtual endpoints) and no three consecutive nodes collinear.
    """

    breaks: tuple = ()

    def __post_init__(self):
        pts = tuple(Point.of(*p) for p in self.breaks)
        object.__setattr__(self, "breaks", pts)
        nodes = (Point(ZERO, ZERO),) + pts + (Point(ONE, ONE),)
        for i in range(len(nodes) - 1):
            if not (nodes[i].x < nodes[i + 1].x and nodes[i].y < nodes[i + 1].y):
                raise NonMonotone(f"nodes {i} and {i + 1} are not strictly increasing")
        for i in range(1, len(nodes) - 1):
            if collinear(nodes[i - 1], nodes[i], nodes[i + 1]):
                raise CollinearBreak(i - 1)

    @classmethod
    def identity(cls) -> "PLMap":
        return cls(())

    @classmethod
    def from_nodes(cls, nodes: Iterable) -> "PLMap":
        """Canonical map through interior nodes, dropping any that are not breaks.

        The nodes must already describe an increasing map; collinear (slope
        ratio 1) nodes are pruned rather than rejected.
        """
        inner = sorted({Point.of(*p) for p in nodes if 0 < Q(p[0]) < 1})
        full = [Point(ZERO, ZERO)] + inner + [Point(ONE, ONE)]
        kept = [
            full[i]
            for i in range(1, len(full) - 1)
            if not collinear(full[i - 1], full[i], full[i + 1])
        ]
        return cls(tuple(kept))

    # -- structure ---------------------------------------------------------

    @property
    def nodes(self) -> tuple:
        return (Point(ZERO, ZERO),) + self.breaks + (Point(ONE, ONE),)

    @property
    def num_breaks(self) -> int:
        return len(self.breaks)

    def is_identity(self) -> bool:
        return not self.breaks

    def segments(self) -> list:
        """Consecutive node pairs ``(p, q)``, end segments included."""
        nodes = self.nodes
        return list(zip(nodes, nodes[1:]))

    def slopes(self) -> list:
        return [(q.y - p.y) / (q.x - p.x) for p, q in self.segments()]

    # -- evaluation --------------------------------------------------------

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def __mul__(self, other: "PLMap") -> "PLMap":
        return compose(self, other)

    def __invert__(self) -> "PLMap":
        return invert(self)

    def __repr__(self):
        inner = ", ".join(f"({p.x}, {p.y})" for p in self.breaks)
        return f"PLMap([{inner}])"


def make_pl(points: Sequence) -> PLMap:
    return PLMap(tuple(points))


def evaluate(f: PLMap, x) -> Fraction:
    x = Q(x)
    if x < 0 or x > 1:
        raise OutOfDomain(f"{x} is outside [0, 1]")
    if x == 0 or x == 1:
        return x
    nodes = f.nodes
    xs = [p.x for p in nodes]
    i = bisect_right(xs, x) - 1
    if xs[i] == x:
        return nodes[i].y
    p, q = nodes[i], nodes[i + 1]
    return p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x)


def invert(f: PLMap) -> PLMap:
    return PLMap(tuple(p.swapped() for p in f.breaks))


def compose(f: PLMap, g: PLMap) -> PLMap:
    """``f o g``: first ``g``, then ``f``.

    Only points of ``B(g)`` and ``g^-1(B(f))`` can be breaks of the product,
    so those are the only abscissae evaluated before pruning.
    """
    if f.is_identity():
        return g
    if g.is_identity():
        return f
    g_inv = invert(g)
    candidates = {p.x for p in g.breaks}
    candidates.update(evaluate(g_inv, p.x) for p in f.breaks)
    return PLMap.from_nodes((x, evaluate(f, evaluate(g, x))) for x in candidates)


def compose_all(*maps: PLMap) -> PLMap:
    """Left-to-right product ``maps[0] o maps[1] o ...``."""
    result = PLMap.identity()
    for m in maps:
        result = compose(result, m)
    return result


def break_points(f: PLMap) -> list:
    return [p.x for p in f.breaks]


def _side_slopes(f: PLMap, x: Fraction):
    nodes = f.nodes
    xs = [p.x for p in nodes]
    i = bisect_left(xs, x)
    slope = lambda p, q: (q.y - p.y) / (q.x - p.x)
    if xs[i] == x:
        return slope(nodes[i - 1], nodes[i]), slope(nodes[i], nodes[i + 1])
    s = slope(nodes[i - 1], nodes[i])
    return s, s


def slope_ratio(f: PLMap, x) -> Fraction:
    """Right derivative over left derivative at an interior point."""
    x = Q(x)
    if not 0 < x < 1:
        raise OutOfDomain(f"slope ratio needs 0 < x < 1, got {x}")
    left, right = _side_slopes(f, x)
    return right / left


def max_slope(f: PLMap) -> Fraction:
    return max(f.slopes())


def bilipschitz_constant(f: PLMap) -> Fraction:
    # the inverse's slopes are reciprocals of f's slopes
    slopes = f.slopes()
    return max(max(slopes), 1 / min(slopes))


def max_slope_on(f: PLMap, J: Interval) -> Fraction:
    """Largest slope among segments meeting ``J`` in a set of positive length."""
    return max(
        (q.y - p.y) / (q.x - p.x)
        for p, q in f.segments()
        if max(p.x, J.lo) < min(q.x, J.hi)
    )


def support(f: PLMap) -> list:
    """Maximal open intervals on which ``f(x) != x``.

    ``f(x) - x`` is linear on each segment, so its zero set consists of nodes
    with ``y == x``, sign-change crossings inside segments, and whole fixed
    segments. Between consecutive zeros the map is either fixed or moving.
    """
    zeros = set()
    for p, q in f.segments():
        dp, dq = p.y - p.x, q.y - q.x
        if dp == 0:
            zeros.add(p.x)
        if dq == 0:
            zeros.add(q.x)
        if dp * dq < 0:
            zeros.add(p.x + dp / (dp - dq) * (q.x - p.x))
    pts = sorted(zeros)
    out = []
    for lo, hi in zip(pts, pts[1:]):
        mid = (lo + hi) / 2
        if evaluate(f, mid) != mid:
            out.append(Interval(lo, hi))
    return out
