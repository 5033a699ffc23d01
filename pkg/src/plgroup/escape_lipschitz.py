"""Diagonal construction escaping every translate ``B_n g_k`` of the bi-Lipschitz ball.

``B_n`` is the set of maps ``f`` with ``f`` and ``f^-1`` both strictly
``n``-Lipschitz. Given disjoint intervals ``J_k`` and adversaries ``g_k``, the
constructed ``f`` lies in ``B_{n^2+1}`` while ``f o g_k^-1`` is outside ``B_n``
for every ``k``. Adversaries are PL maps so every check is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ArityMismatch, CertificateFailure, DisjointnessViolated
from .pl_core import (
    Interval,
    PLMap,
    Point,
    bilipschitz_constant,
    compose,
    evaluate,
    invert,
    max_slope_on,
)


@dataclass(frozen=True)
class IntervalFamily:
    intervals: tuple

    def __post_init__(self):
        ivs = tuple(self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for J in ivs:
            if J.lo < 0 or J.hi > 1:
                raise DisjointnessViolated(f"{J} is not inside [0, 1]")
        ordered = sorted(ivs, key=lambda J: J.lo)
        for left, right in zip(ordered, ordered[1:]):
            if left.hi > right.lo:
                raise DisjointnessViolated(f"{left} and {right} overlap")

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)


def is_n_lipschitz_on(f: PLMap, J: Interval, n) -> bool:
    """Strict ``|f(x) - f(y)| < n |x - y|`` on ``J``: the largest slope there is below ``n``."""
    return max_slope_on(f, J) < n


def image(f: PLMap, J: Interval) -> Interval:
    return Interval(evaluate(f, J.lo), evaluate(f, J.hi))


def escape_case(g: PLMap, J: Interval, n: int) -> int:
    """2 when ``g`` is n-Lipschitz on ``J`` and ``g^-1`` on ``g(J)``, else 1."""
    if is_n_lipschitz_on(g, J, n) and is_n_lipschitz_on(invert(g), image(g, J), n):
        return 2
    return 1


def escape_point(J: Interval, n: int) -> Point:
    """The single break placed on a case-2 interval."""
    step = J.length / (n * n + 1)
    return Point(J.lo + step, J.hi - step)


def build_escape_lip(n: int, J: IntervalFamily, adversaries: Sequence[PLMap]) -> PLMap:
    if n < 2:
        raise ValueError("n must be >= 2: the strict ball B_1 is empty")
    if len(adversaries) != len(J):
        raise ArityMismatch(f"{len(J)} intervals but {len(adversaries)} adversaries")
    nodes = []
    for Jk, g in zip(J, adversaries):
        if escape_case(g, Jk, n) == 2:
            nodes += [Point(Jk.lo, Jk.lo), escape_point(Jk, n), Point(Jk.hi, Jk.hi)]
    return PLMap.from_nodes(nodes)


@dataclass(frozen=True)
class LipRecord:
    k: int
    case: int
    side: str  # "map" for f o g^-1, "inverse" for g o f^-1
    witness_points: tuple
    quotient: Fraction


@dataclass(frozen=True)
class LipEscapeCertificate:
    f: PLMap
    n: int
    intervals: IntervalFamily
    adversaries: tuple
    records: tuple
    bilipschitz_constant: Fraction


def _steepest_pair(h: PLMap, J: Interval):
    """Endpoints of the steepest segment of ``h`` clipped to ``cl J``."""
    best = None
    for p, q in h.segments():
        lo, hi = max(p.x, J.lo), min(q.x, J.hi)
        if lo < hi:
            s = (q.y - p.y) / (q.x - p.x)
            if best is None or s > best[0]:
                best = (s, lo, hi)
    return best[1], best[2]


def _quotient(h: PLMap, p: Fraction, q: Fraction) -> Fraction:
    return (evaluate(h, q) - evaluate(h, p)) / (q - p)


def verify_escape_lip(
    f: PLMap, n: int, J: IntervalFamily, adversaries: Sequence[PLMap]
) -> LipEscapeCertificate:
    """Certify ``f in B_{n^2+1}`` and ``f o g_k^-1 not in B_n`` for every ``k``.

    Case 2: the quotient of ``f o g_k^-1`` over ``g_k(a_k), g_k(x_k)`` must
    exceed ``n``. Case 1: ``f`` is the identity on ``J_k``, so ``f o g_k^-1``
    agrees with ``g_k^-1`` on ``g_k(J_k)``; the adversary's own steep segment
    is then exhibited on the composite (or its inverse) with quotient ``>= n``.
    """
    if len(adversaries) != len(J):
        raise ArityMismatch(f"{len(J)} intervals but {len(adversaries)} adversaries")
    records = []
    for k, (Jk, g) in enumerate(zip(J, adversaries)):
        h = compose(f, invert(g))
        case = escape_case(g, Jk, n)
        if case == 2:
            xk = escape_point(Jk, n).x
            p, q = evaluate(g, Jk.lo), evaluate(g, xk)
            quot = _quotient(h, p, q)
            if not quot > n:
                raise CertificateFailure(k, "map", "quotient does not exceed n", quotient=quot, n=n)
            records.append(LipRecord(k, 2, "map", (p, q), quot))
            continue
        if any(evaluate(f, x) != x for x in _sample_points(f, Jk)):
            raise CertificateFailure(k, "map", "f is not the identity on a case-1 interval")
        g_inv = invert(g)
        gJ = image(g, Jk)
        if not is_n_lipschitz_on(g_inv, gJ, n):
            side, target, where = "map", h, gJ
        else:
            side, target, where = "inverse", invert(h), Jk
        p, q = _steepest_pair(target, where)
        quot = _quotient(target, p, q)
        if not quot >= n:
            raise CertificateFailure(k, side, "transferred violation is below n", quotient=quot, n=n)
        records.append(LipRecord(k, 1, side, (p, q), quot))
    bl = bilipschitz_constant(f)
    if not bl < n * n + 1:
        raise CertificateFailure(-1, "global", "f is not in B_{n^2+1}", bilipschitz=bl)
    return LipEscapeCertificate(f, n, J, tuple(adversaries), tuple(records), bl)


def _sample_points(f: PLMap, J: Interval) -> list:
    """Nodes of ``f`` inside ``cl J`` plus the endpoints and midpoint; enough to detect non-identity."""
    pts = {J.lo, J.hi, J.midpoint}
    pts.update(p.x for p in f.breaks if J.lo <= p.x <= J.hi)
    ordered = sorted(pts)
    pts.update((a + b) / 2 for a, b in zip(ordered, ordered[1:]))
    return sorted(pts)


def escape_lipschitz(n: int, J: IntervalFamily, adversaries: Sequence[PLMap]) -> LipEscapeCertificate:
    return verify_escape_lip(build_escape_lip(n, J, adversaries), n, J, adversaries)
