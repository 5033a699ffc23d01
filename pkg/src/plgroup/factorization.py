"""Write a map with n breaks as a product of n maps with one break each."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .pl_core import PLMap, Point, compose, compose_all, invert, slope_ratio


@dataclass(frozen=True)
class Factorization:
    """``f == factors[0] o factors[1] o ... o factors[-1]``."""

    factors: tuple

    def product(self) -> PLMap:
        return compose_all(*self.factors)

    def __len__(self):
        return len(self.factors)


def one_break_with_ratio(x: Fraction, r: Fraction) -> PLMap:
    """The unique one-break map with break at ``x`` and slope ratio ``r``.

    Solving ``r = x(1-y) / (y(1-x))`` for the image ``y`` of the break.
    """
    y = x / (x + r * (1 - x))
    return PLMap((Point(x, y),))


def peel(f: PLMap):
    """Split off the least break: returns ``(h, g)`` with ``f == h o g``.

    ``g`` carries the slope ratio of ``f`` at its least break ``x1``; by the
    chain rule ``h = f o g^-1`` has ratio 1 at ``g(x1)``, so ``h`` has one
    break fewer than ``f`` and no new ones.
    """
    x1 = f.breaks[0].x
    g = one_break_with_ratio(x1, slope_ratio(f, x1))
    return compose(f, invert(g)), g


def factor_one_break(f: PLMap) -> Factorization:
    peeled = []
    while not f.is_identity():
        f, g = peel(f)
        peeled.append(g)
    return Factorization(tuple(reversed(peeled)))


def is_in_Bn(f: PLMap, n: int) -> bool:
    return f.num_breaks <= n
