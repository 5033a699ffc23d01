"""Bump maps, commutators, and constructive witnesses for non-commutation.

A bump ``g_U`` is a non-identity map fixing the complement of ``U``. Two
searches live here: one finds a bump that fails to commute with a map moving
some point of ``W``; the other probes the set ``C(U, V) = {f : f(cl U) in cl V}``
through commutators of bumps, falling back to a guided search whenever the
direct endpoint test says ``f`` is outside.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .encoding import SampleConfig, rng_for
from .errors import DegenerateInterval, VacuousCase
from .pl_core import (
    Interval,
    PLMap,
    Point,
    compose_all,
    evaluate,
    invert,
    support,
)

GRID = 64


def bump(U: Interval) -> PLMap:
    """Single-apex map on ``U = (a, b)``: the midpoint moves up by ``(b - a) / 8``."""
    a, b = U.lo, U.hi
    if not (0 <= a < b <= 1):
        raise DegenerateInterval(f"bump needs 0 <= a < b <= 1, got {U}")
    m = (a + b) / 2
    pts = []
    if a > 0:
        pts.append(Point(a, a))
    pts.append(Point(m, m + (b - a) / 8))
    if b < 1:
        pts.append(Point(b, b))
    return PLMap(tuple(pts))


def commutator(f: PLMap, g: PLMap) -> PLMap:
    return compose_all(f, g, invert(f), invert(g))


def conjugate(f: PLMap, g: PLMap) -> PLMap:
    """``f g f^-1``."""
    return compose_all(f, g, invert(f))


def moves_somewhere(f: PLMap, W: Interval) -> Optional[Fraction]:
    """A point of ``W`` moved by ``f``, or ``None`` if ``f`` fixes ``W``."""
    for piece in support(f):
        common = piece.intersect(W)
        if common is not None:
            return common.midpoint
    return None


@dataclass(frozen=True)
class NonCommuteWitness:
    W: Interval
    z: Fraction
    left: Fraction
    right: Fraction

    @property
    def g(self) -> PLMap:
        return bump(self.W)


def noncommute_witness(f: PLMap, W: Interval) -> Optional[NonCommuteWitness]:
    """Shrink ``W`` around a moved point until ``f`` pushes it off itself.

    With ``2*delta < |f(x) - x|`` the set
    ``W' = W & (x-delta, x+delta) & f^-1(f(x)-delta, f(x)+delta)``
    is disjoint from its image, so the bump on ``W'`` moves a point ``z``
    while fixing ``f(z)``.
    """
    x = moves_somewhere(f, W)
    if x is None:
        return None
    y = evaluate(f, x)
    f_inv = invert(f)
    delta = abs(y - x) / 4
    while True:
        pre_lo = evaluate(f_inv, max(y - delta, Fraction(0)))
        pre_hi = evaluate(f_inv, min(y + delta, Fraction(1)))
        lo = max(W.lo, x - delta, pre_lo, Fraction(0))
        hi = min(W.hi, x + delta, pre_hi, Fraction(1))
        if lo < hi:
            break
        delta /= 2
    W_small = Interval(lo, hi)
    g = bump(W_small)
    z = W_small.midpoint
    left = evaluate(f, evaluate(g, z))
    right = evaluate(g, evaluate(f, z))
    assert left != right
    return NonCommuteWitness(W_small, z, left, right)


def cuv_direct(f: PLMap, U: Interval, V: Interval) -> bool:
    """``f(cl U)`` inside ``cl V``; monotone, so the endpoints decide."""
    return evaluate(f, U.lo) >= V.lo and evaluate(f, U.hi) <= V.hi


def _outside_components(V: Interval) -> list:
    comps = []
    if V.lo > 0:
        comps.append(Interval(0, V.lo))
    if V.hi < 1:
        comps.append(Interval(V.hi, 1))
    return comps


def _grid_subinterval(J: Interval, rng) -> Interval:
    i, j = sorted(int(v) for v in rng.choice(GRID + 1, size=2, replace=False))
    step = J.length / GRID
    return Interval(J.lo + i * step, J.lo + j * step)


@dataclass(frozen=True)
class CuvViolation:
    U_sub: Interval
    W_sub: Interval
    guided: bool


@dataclass(frozen=True)
class CuvProbeResult:
    holds: bool
    probes: int
    violation: Optional[CuvViolation] = None


def probe_commutes(f: PLMap, U_sub: Interval, W_sub: Interval) -> bool:
    return commutator(conjugate(f, bump(U_sub)), bump(W_sub)).is_identity()


def guided_violation(f: PLMap, U: Interval, V: Interval) -> Optional[CuvViolation]:
    """Reverse direction of the set identity, made constructive.

    Take ``U' = U & f^-1(I - cl V)``; the conjugate of ``g_{U'}`` moves points
    outside ``cl V``, and the non-commutation witness supplies ``W'``.
    """
    f_inv = invert(f)
    pieces = []
    if V.hi < 1:
        lo = max(U.lo, evaluate(f_inv, V.hi))
        if lo < U.hi:
            pieces.append(Interval(lo, U.hi))
    if V.lo > 0:
        hi = min(U.hi, evaluate(f_inv, V.lo))
        if U.lo < hi:
            pieces.append(Interval(U.lo, hi))
    for U_sub in pieces:
        h = conjugate(f, bump(U_sub))
        for W in _outside_components(V):
            wit = noncommute_witness(h, W)
            if wit is not None:
                assert not probe_commutes(f, U_sub, wit.W)
                return CuvViolation(U_sub, wit.W, guided=True)
    return None


def cuv_commutator_probe(
    f: PLMap, U: Interval, V: Interval, cfg: SampleConfig, probes: int = 50
) -> CuvProbeResult:
    """Test sampled ``[f g_U' f^-1, g_W'] == e``, then run the guided search.

    Sampled subintervals sit on a ``GRID``-point rational grid inside ``U`` and
    inside a component of ``I - cl V``.
    """
    comps = _outside_components(V)
    if not comps:
        raise VacuousCase("cl V is all of [0, 1]; C(U, V) is the whole group")
    rng = rng_for(cfg.seed, stream=0)
    for _ in range(probes):
        U_sub = _grid_subinterval(U, rng)
        W_sub = _grid_subinterval(comps[int(rng.integers(len(comps)))], rng)
        if not probe_commutes(f, U_sub, W_sub):
            return CuvProbeResult(False, probes, CuvViolation(U_sub, W_sub, guided=False))
    found = guided_violation(f, U, V)
    return CuvProbeResult(found is None, probes, found)

