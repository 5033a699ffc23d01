"""C^{1+eps} diagonal construction with piecewise-quadratic maps.

Maps here are antiderivatives of positive PL derivative profiles. Irrational
quantities only ever appear as ``t**eps`` with ``eps = p/q``; every comparison
involving them is decided by raising both sides to the ``q``-th power.
Interval lengths must be exact ``q``-th powers of rationals so that
``length**eps`` stays rational.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import gmpy2

from .errors import (
    AreaMismatch,
    ArityMismatch,
    CaseUndecided,
    CertificateFailure,
    IrrationalPower,
    NonPositiveDerivative,
    OutOfDomain,
    SeparationViolated,
)
from .pl_core import Interval, Point, Q, collinear


@dataclass(frozen=True)
class HoelderExponent:
    p: int
    q: int

    def __post_init__(self):
        if not (0 < self.p < self.q) or gcd(self.p, self.q) != 1:
            raise ValueError(f"need 0 < p < q coprime, got {self.p}/{self.q}")

    @classmethod
    def parse(cls, text: str) -> "HoelderExponent":
        v = Fraction(text)
        return cls(v.numerator, v.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


def integer_root(value: int, q: int) -> Optional[int]:
    root, exact = gmpy2.iroot(gmpy2.mpz(value), q)
    return int(root) if exact else None


def rational_root(value: Fraction, q: int) -> Fraction:
    """Exact ``q``-th root of a non-negative rational."""
    num, den = integer_root(value.numerator, q), integer_root(value.denominator, q)
    if num is None or den is None:
        raise IrrationalPower(f"{value} is not the {q}-th power of a rational")
    return Fraction(num, den)


def rational_power(value: Fraction, eps: HoelderExponent) -> Fraction:
    return rational_root(value, eps.q) ** eps.p


def hoelder_exceeds(diff, dist, bound, eps: HoelderExponent) -> bool:
    """``diff > bound * dist**eps`` for non-negative arguments."""
    return diff**eps.q > bound**eps.q * dist**eps.p


# -- PL derivative profiles and their antiderivatives ------------------------


@dataclass(frozen=True)
class PLFunction:
    """Continuous PL function on ``[nodes[0].x, nodes[-1].x]``."""

    nodes: tuple

    def __post_init__(self):
        pts = tuple(Point.of(*p) for p in self.nodes)
        object.__setattr__(self, "nodes", pts)
        if len(pts) < 2:
            raise ValueError("a PL function needs at least two nodes")
        if any(a.x >= b.x for a, b in zip(pts, pts[1:])):
            raise ValueError("node abscissae must increase strictly")

    @classmethod
    def canonical(cls, nodes) -> "PLFunction":
        """Sort, merge equal abscissae (later value wins) and drop collinear interior nodes."""
        by_x = {}
        for p in nodes:
            p = Point.of(*p)
            by_x[p.x] = p
        pts = [by_x[x] for x in sorted(by_x)]
        kept = [pts[0]]
        for i in range(1, len(pts) - 1):
            if not collinear(kept[-1], pts[i], pts[i + 1]):
                kept.append(pts[i])
        kept.append(pts[-1])
        return cls(tuple(kept))

    @property
    def lo(self) -> Fraction:
        return self.nodes[0].x

    @property
    def hi(self) -> Fraction:
        return self.nodes[-1].x

    def segments(self):
        return list(zip(self.nodes, self.nodes[1:]))

    def __call__(self, x) -> Fraction:
        x = Q(x)
        if x < self.lo or x > self.hi:
            raise OutOfDomain(f"{x} outside [{self.lo}, {self.hi}]")
        xs = [p.x for p in self.nodes]
        i = min(bisect_right(xs, x) - 1, len(xs) - 2)
        p, r = self.nodes[i], self.nodes[i + 1]
        return p.y + (r.y - p.y) * (x - p.x) / (r.x - p.x)

    def integral(self, a=None, b=None) -> Fraction:
        """Exact integral over ``[a, b]`` (trapezoids are exact for linear pieces)."""
        a = self.lo if a is None else Q(a)
        b = self.hi if b is None else Q(b)
        xs = sorted({a, b} | {p.x for p in self.nodes if a < p.x < b})
        return sum(((r - l) * (self(l) + self(r)) / 2 for l, r in zip(xs, xs[1:])), Fraction(0))

    def segment_slopes(self, a=None, b=None) -> list:
        """Slopes of the pieces meeting ``(a, b)`` in positive length."""
        a = self.lo if a is None else Q(a)
        b = self.hi if b is None else Q(b)
        return [
            (r.y - p.y) / (r.x - p.x)
            for p, r in self.segments()
            if max(p.x, a) < min(r.x, b)
        ]

    def points_in(self, a, b) -> list:
        """Node abscissae in ``[a, b]`` together with ``a`` and ``b``."""
        return sorted({Q(a), Q(b)} | {p.x for p in self.nodes if a <= p.x <= b})


@dataclass(frozen=True)
class PQMap:
    """Antiderivative of ``profile`` fixing the left end of its domain.

    Structural checks only; :meth:`validate` enforces positivity and the
    area identity that makes the map a self-diffeomorphism of its domain.
    """

    profile: PLFunction

    @classmethod
    def identity(cls, lo=0, hi=1) -> "PQMap":
        return cls(PLFunction(((Q(lo), Fraction(1)), (Q(hi), Fraction(1)))))

    @property
    def lo(self) -> Fraction:
        return self.profile.lo

    @property
    def hi(self) -> Fraction:
        return self.profile.hi

    def validate(self) -> "PQMap":
        for p in self.profile.nodes:
            if p.y <= 0:
                raise NonPositiveDerivative(f"derivative {p.y} at {p.x}")
        area = self.profile.integral()
        if area != self.hi - self.lo:
            raise AreaMismatch(f"integral {area} != length {self.hi - self.lo}")
        return self

    def derivative_at(self, x) -> Fraction:
        return self.profile(x)

    def __call__(self, x) -> Fraction:
        x = Q(x)
        return self.lo + self.profile.integral(self.lo, x)

    def max_derivative(self) -> Fraction:
        return max(p.y for p in self.profile.nodes)

    def min_derivative_on(self, a, b) -> Fraction:
        return min(self.profile(x) for x in self.profile.points_in(a, b))


def antiderivative_map(profile: PLFunction, J: Interval) -> PQMap:
    if profile.lo != J.lo or profile.hi != J.hi:
        raise ValueError(f"profile domain [{profile.lo}, {profile.hi}] is not cl {J}")
    return PQMap(profile).validate()


def glue(pieces: Sequence[PLFunction]) -> PQMap:
    """Global map on [0, 1]: derivative 1 off the pieces, ``pieces`` on their domains."""
    nodes = [(0, 1), (1, 1)]
    for piece in pieces:
        nodes += list(piece.nodes)
    return PQMap(PLFunction.canonical(nodes)).validate()


def wiggle_map(region: Interval, height) -> PQMap:
    """Identity off ``region``; derivative rises by ``height`` then dips by it.

    The two tents cancel in area, so the result is always a diffeomorphism
    for ``0 < height < 1``.
    """
    h = Q(height)
    a, step = region.lo, region.length / 4
    piece = PLFunction(
        ((a, 1), (a + step, 1 + h), (a + 2 * step, 1), (a + 3 * step, 1 - h), (region.hi, 1))
    )
    return glue([piece])


# -- the construction --------------------------------------------------------


def escape_profile(J: Interval, n: int, eps: HoelderExponent) -> PLFunction:
    """Derivative on a case-2 interval: symmetric spike at the midpoint with two dips.

    Spike value ``1 + L (n+1)^4`` and dip value ``1 - L`` with ``L = length**eps``;
    the dips sit ``length / (2 (n+1)^4)`` either side of the midpoint, which
    balances the area exactly.
    """
    ell = J.length
    L = rational_power(ell, eps)
    N = (n + 1) ** 4
    mid = J.midpoint
    delta = ell / (2 * N)
    return PLFunction(
        (
            (J.lo, 1),
            (mid - delta, 1 - L),
            (mid, 1 + L * N),
            (mid + delta, 1 - L),
            (J.hi, 1),
        )
    )


def global_hoelder_constant(n: int) -> int:
    N = (n + 1) ** 4
    return 2 * (N + 1) * N


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class HoelderViolation:
    """``x, y`` are in domain coordinates; ``dist`` is measured on the tested side."""

    side: str  # "map": g' on J; "inverse": (g^-1)' on g(J)
    x: Fraction
    y: Fraction
    diff: Fraction
    dist: Fraction


def find_hoelder_violation(g: PQMap, J: Interval, n, eps: HoelderExponent) -> Optional[HoelderViolation]:
    """Exact node-pair witness that ``g'`` or ``(g^-1)'`` is not n-Hoelder.

    Strict ``>`` at closure points implies a violating pair inside the open
    interval by continuity.
    """
    pts = g.profile.points_in(J.lo, J.hi)
    der = {x: g.derivative_at(x) for x in pts}
    img = {x: g(x) for x in pts}
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            diff, dist = abs(der[x] - der[y]), y - x
            if hoelder_exceeds(diff, dist, n, eps):
                return HoelderViolation("map", x, y, diff, dist)
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            diff, dist = abs(1 / der[x] - 1 / der[y]), img[y] - img[x]
            if hoelder_exceeds(diff, dist, n, eps):
                return HoelderViolation("inverse", x, y, diff, dist)
    return None


def _sufficient_yes(g: PQMap, J: Interval, n, eps: HoelderExponent) -> bool:
    slopes = g.profile.segment_slopes(J.lo, J.hi)
    S = max((abs(s) for s in slopes), default=Fraction(0))
    # |g'(x) - g'(y)| <= S |x - y| < S ell^(1-eps) |x - y|^eps
    if S**eps.q * J.length ** (eps.q - eps.p) > Q(n) ** eps.q:
        return False
    # the inverse side, with m = min g' and ell' = |g(J)|
    m = g.min_derivative_on(J.lo, J.hi)
    ell_img = g(J.hi) - g(J.lo)
    return (S / m**3) ** eps.q * ell_img ** (eps.q - eps.p) <= Q(n) ** eps.q


def hoelder_case_test(g: PQMap, J: Interval, n, eps: HoelderExponent) -> Verdict:
    """NO on an exact witness, YES on the slope bound ``S * ell^(1-eps) <= n``, else UNKNOWN.

    Both ``g'`` on ``J`` and ``(g^-1)'`` on ``g(J)`` are examined.
    """
    if find_hoelder_violation(g, J, n, eps) is not None:
        return Verdict.NO
    if _sufficient_yes(g, J, n, eps):
        return Verdict.YES
    return Verdict.UNKNOWN


def derivative_sup_bound_check(f: PQMap, n, eps: HoelderExponent, verdict: Optional[Verdict] = None) -> bool:
    """A derivative that is n-Hoelder on all of [0, 1] cannot exceed ``n + 1``.

    ``verdict`` overrides the classification of ``f'`` on (0, 1); returns
    False only when a YES verdict coexists with ``max f' > n + 1``.
    """
    if verdict is None:
        verdict = hoelder_case_test(f, Interval(0, 1), n, eps)
    if verdict is not Verdict.YES:
        return True
    return f.max_derivative() <= n + 1


def compose_hoelder_bound(n: int, eps: HoelderExponent) -> int:
    """Least integer strictly above ``n((n+1) + (n+1)^(1+eps))``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    # n (n+1)^(1+eps) = (n^q (n+1)^(q+p))^(1/q); its floor is an integer root
    t = n**eps.q * (n + 1) ** (eps.q + eps.p)
    root, _ = gmpy2.iroot(gmpy2.mpz(t), eps.q)
    return n * (n + 1) + int(root) + 1


@dataclass(frozen=True)
class SeparatedFamily:
    intervals: tuple

    def __post_init__(self):
        ivs = tuple(self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for J in ivs:
            if J.lo < 0 or J.hi > 1:
                raise SeparationViolated(f"{J} is not inside [0, 1]")
        ordered = sorted(ivs, key=lambda J: J.lo)
        for i, A in enumerate(ordered):
            for B in ordered[i + 1:]:
                if B.lo - A.hi < max(A.length, B.length):
                    raise SeparationViolated(f"{A} and {B} are closer than their lengths")

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)


def separated_family(lengths: Sequence, start=None) -> SeparatedFamily:
    """Lay intervals out left to right, each gap equal to the larger neighbour."""
    lengths = [Q(v) for v in lengths]
    pos = lengths[0] if start is None else Q(start)
    out = []
    for i, ell in enumerate(lengths):
        if i:
            pos += max(ell, lengths[i - 1])
        out.append(Interval(pos, pos + ell))
        pos += ell
    return SeparatedFamily(tuple(out))


def _check_lengths(J: SeparatedFamily, eps: HoelderExponent):
    for Jk in J:
        rational_power(Jk.length, eps)
        if Jk.length >= 1:
            raise ValueError(f"{Jk} is too long for a positive dip")


def build_escape_hoelder(
    n: int, eps: HoelderExponent, J: SeparatedFamily, adversaries: Sequence[PQMap]
) -> PQMap:
    if len(adversaries) != len(J):
        raise ArityMismatch(f"{len(J)} intervals but {len(adversaries)} adversaries")
    _check_lengths(J, eps)
    pieces = []
    for k, (Jk, g) in enumerate(zip(J, adversaries)):
        verdict = hoelder_case_test(g, Jk, n, eps)
        if verdict is Verdict.UNKNOWN:
            raise CaseUndecided(f"adversary {k} is neither certified Hoelder nor refuted on {Jk}")
        if verdict is Verdict.YES:
            pieces.append(escape_profile(Jk, n, eps))
    return glue(pieces)


# -- certification -----------------------------------------------------------


@dataclass(frozen=True)
class HoelderRecord:
    k: int
    case: int
    side: str
    witness: tuple
    lhs: Fraction
    rhs_base: Fraction
    lhs_power: Fraction
    rhs_power: Fraction


@dataclass(frozen=True)
class HoelderCertificate:
    f: PQMap
    n: int
    eps: HoelderExponent
    intervals: SeparatedFamily
    adversaries: tuple
    records: tuple
    constant: int


def _is_one_on(f: PQMap, a, b) -> bool:
    return all(f.derivative_at(x) == 1 for x in f.profile.points_in(a, b))


def _check_global_shape(f: PQMap, J: SeparatedFamily, eps: HoelderExponent, C: int):
    try:
        f.validate()
    except (AreaMismatch, NonPositiveDerivative) as exc:
        raise CertificateFailure(-1, "global", str(exc)) from exc
    if f.lo != 0 or f.hi != 1:
        raise CertificateFailure(-1, "global", "f is not defined on [0, 1]")
    ordered = sorted(J, key=lambda Jk: Jk.lo)
    edges = [Fraction(0)] + [v for Jk in ordered for v in (Jk.lo, Jk.hi)] + [Fraction(1)]
    for a, b in zip(edges[::2], edges[1::2]):
        if a < b and not _is_one_on(f, a, b):
            raise CertificateFailure(-1, "global", f"f' is not 1 on [{a}, {b}]")
    for k, Jk in enumerate(J):
        for x in (Jk.lo, Jk.hi):
            if f.derivative_at(x) != 1:
                raise CertificateFailure(k, "junction", "f' != 1", x=x, value=f.derivative_at(x))
        area = f.profile.integral(Jk.lo, Jk.hi)
        if area != Jk.length:
            raise CertificateFailure(k, "area", "integral of f' != length", area=area, length=Jk.length)
        ell = Jk.length
        for s in f.profile.segment_slopes(Jk.lo, Jk.hi):
            # |s| <= C ell^(eps-1)  <=>  |s|^q ell^(q-p) <= C^q
            if abs(s) ** eps.q * ell ** (eps.q - eps.p) > Fraction(C) ** eps.q:
                raise CertificateFailure(k, "slope", "segment slope above C ell^(eps-1)", slope=s)
        pts = f.profile.points_in(Jk.lo, Jk.hi)
        for i, x in enumerate(pts):
            for y in pts[i + 1:]:
                diff = abs(f.derivative_at(x) - f.derivative_at(y))
                if diff**eps.q >= Fraction(C) ** eps.q * (y - x) ** eps.p:
                    raise CertificateFailure(k, "hoelder", "node pair breaks the C bound", x=x, y=y)


def _extremes(f: PQMap, Jk: Interval):
    pts = f.profile.points_in(Jk.lo, Jk.hi)
    vals = [(f.derivative_at(x), x) for x in pts]
    return min(vals)[1], max(vals)[1]


def cross_interval_pairs(f: PQMap, J: SeparatedFamily) -> list:
    """Candidate points: nodes and midpoints in each interval, plus gap points."""
    pts = set()
    for Jk in J:
        inner = f.profile.points_in(Jk.lo, Jk.hi)
        pts.update(inner)
        pts.update((a + b) / 2 for a, b in zip(inner, inner[1:]))
    ordered = sorted(J, key=lambda Jk: Jk.lo)
    edges = [Fraction(0)] + [v for Jk in ordered for v in (Jk.lo, Jk.hi)] + [Fraction(1)]
    pts.update((a + b) / 2 for a, b in zip(edges[::2], edges[1::2]) if a < b)
    pts = sorted(pts)
    return [(x, y) for i, x in enumerate(pts) for y in pts[i + 1:]]


def check_cross_pair(f: PQMap, J: SeparatedFamily, x: Fraction, y: Fraction) -> bool:
    """Reduce a two-point Hoelder check to one inside a single interval.

    For ``x`` in some ``J_k`` we look for ``z`` in ``cl J_k`` with
    ``|f'(x) - f'(z)| >= |f'(x) - f'(y)|`` and ``|x - z| <= |x - y|``;
    candidates are the extremal nodes of ``f'`` and the endpoints of ``J_k``.
    Both orientations are tried; pairs with ``f'(x) == f'(y)`` are trivial.
    """
    fx, fy = f.derivative_at(x), f.derivative_at(y)
    if fx == fy:
        return True
    for u, v, fu, fv in ((x, y, fx, fy), (y, x, fy, fx)):
        for Jk in J:
            if not Jk.lo <= u <= Jk.hi:
                continue
            lo_pt, hi_pt = _extremes(f, Jk)
            for z in (lo_pt, hi_pt, Jk.lo, Jk.hi):
                if abs(fu - f.derivative_at(z)) >= abs(fu - fv) and abs(u - z) <= abs(u - v):
                    return True
    return False


def verify_escape_hoelder(
    f: PQMap, n: int, eps: HoelderExponent, J: SeparatedFamily, adversaries: Sequence[PQMap]
) -> HoelderCertificate:
    """Certify ``f`` is C^{1+eps} with constant ``C`` and escapes every ``B_n g_k``.

    Case 2 uses ``(f g^-1)'(g(x)) = f'(x) / g'(x)``, so no inverse is evaluated.
    """
    if len(adversaries) != len(J):
        raise ArityMismatch(f"{len(J)} intervals but {len(adversaries)} adversaries")
    C = global_hoelder_constant(n)
    _check_global_shape(f, J, eps, C)
    for x, y in cross_interval_pairs(f, J):
        diff = abs(f.derivative_at(x) - f.derivative_at(y))
        if diff**eps.q >= Fraction(C) ** eps.q * (y - x) ** eps.p or not check_cross_pair(f, J, x, y):
            raise CertificateFailure(-1, "cross", "cross-interval Hoelder check failed", x=x, y=y)

    target = Fraction(n * (n + 1))
    records = []
    for k, (Jk, g) in enumerate(zip(J, adversaries)):
        verdict = hoelder_case_test(g, Jk, n, eps)
        if verdict is Verdict.UNKNOWN:
            raise CertificateFailure(k, "case", "adversary is undecided")
        if verdict is Verdict.YES:
            a, xk = Jk.lo, Jk.midpoint
            lhs = abs(f.derivative_at(xk) / g.derivative_at(xk) - f.derivative_at(a) / g.derivative_at(a))
            rhs = abs(g(xk) - g(a))
            lp, rp = lhs**eps.q, target**eps.q * rhs**eps.p
            if not lp > rp:
                raise CertificateFailure(k, "map", "violation comparison fails", lhs=lhs, rhs_base=rhs, lhs_power=lp, rhs_power=rp)
            records.append(HoelderRecord(k, 2, "map", (a, xk), lhs, rhs, lp, rp))
            continue
        if not _is_one_on(f, Jk.lo, Jk.hi):
            raise CertificateFailure(k, "map", "f' is not 1 on a case-1 interval")
        wit = find_hoelder_violation(g, Jk, n, eps)
        x, y = wit.x, wit.y
        if f(x) != x or f(y) != y:
            raise CertificateFailure(k, wit.side, "f does not fix the witness points")
        if wit.side == "map":
            # (g f^-1)' = g' / f' on J_k, and f fixes J_k
            vals = (g.derivative_at(x) / f.derivative_at(x), g.derivative_at(y) / f.derivative_at(y))
            dist = y - x
        else:
            # (f g^-1)'(g(t)) = f'(t) / g'(t)
            vals = (f.derivative_at(x) / g.derivative_at(x), f.derivative_at(y) / g.derivative_at(y))
            dist = g(y) - g(x)
        lhs = abs(vals[0] - vals[1])
        lp, rp = lhs**eps.q, Fraction(n) ** eps.q * dist**eps.p
        if not lp > rp:
            raise CertificateFailure(k, wit.side, "transferred violation fails", lhs=lhs, rhs_base=dist)
        records.append(HoelderRecord(k, 1, wit.side, (x, y), lhs, dist, lp, rp))
    return HoelderCertificate(f, n, eps, J, tuple(adversaries), tuple(records), C)


def escape_hoelder(n: int, eps: HoelderExponent, J: SeparatedFamily, adversaries: Sequence[PQMap]) -> HoelderCertificate:
    return verify_escape_hoelder(build_escape_hoelder(n, eps, J, adversaries), n, eps, J, adversaries)
