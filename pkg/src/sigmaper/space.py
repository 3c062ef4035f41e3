"""Exact geometry of the covering space S = R u B.

S is the real line with a closed unit segment ("branch") attached at every
integer.  Points are either real or sit at a positive height on one branch.
All coordinates are exact rationals; the metric is the taxicab metric, which
makes S an R-tree: any two points are joined by a unique arc, and the median
of three points is well defined.  Everything in this module is immutable.

Textual syntax used by map files and reports: ``R(p/q)`` for a real point and
``B(m,p/q)`` for the point of the branch over the integer m at height p/q.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True, order=False)
class SPoint:
    """A point of S, canonical form.

    ``height == 0`` means a real point with coordinate ``base``; otherwise the
    point lies on the branch over the integer ``base`` at ``height`` in (0,1].
    Branch points at height 0 never exist: the constructor collapses them to
    the real base point.
    """

    base: Fraction
    height: Fraction

    def __post_init__(self):
        if self.height < 0 or self.height > 1:
            raise ValueError(f"branch height {self.height} outside [0,1]")
        if self.height > 0 and self.base.denominator != 1:
            raise ValueError(f"branch base {self.base} is not an integer")

    @property
    def is_real(self) -> bool:
        return self.height == 0

    @property
    def re(self) -> Fraction:
        return self.base

    @property
    def im(self) -> Fraction:
        return self.height

    def translate(self, k: int) -> "SPoint":
        return SPoint(self.base + k, self.height)

    def __repr__(self) -> str:
        return format_point(self)


def R(x) -> SPoint:
    """Real point."""
    return SPoint(Fraction(x), ZERO)


def B(m, h) -> SPoint:
    """Branch point over integer m at height h; B(m, 0) collapses to R(m)."""
    h = Fraction(h)
    if h == 0:
        return R(m)
    return SPoint(Fraction(m), h)


def re(p: SPoint) -> Fraction:
    """Retraction of S onto the real line."""
    return p.base


def dist(p: SPoint, q: SPoint) -> Fraction:
    """Taxicab distance: climb down, run along R, climb up."""
    if p.height > 0 and q.height > 0 and p.base == q.base:
        return abs(p.height - q.height)
    return p.height + abs(p.base - q.base) + q.height


def mod1(p: SPoint) -> tuple[SPoint, int]:
    """Return (q, k) with p = q + k and re(q) in [0,1)."""
    if p.height > 0:
        k = int(p.base)
        return SPoint(ZERO, p.height), k
    k = p.base.numerator // p.base.denominator  # floor
    return SPoint(p.base - k, ZERO), k


_POINT_RE = _re.compile(
    r"""^\s*(?:
        R\(\s*(?P<rx>-?\d+(?:/\d+)?)\s*\)
      | B\(\s*(?P<bm>-?\d+)\s*,\s*(?P<bh>-?\d+(?:/\d+)?)\s*\)
    )\s*$""",
    _re.VERBOSE,
)


def parse_point(text: str) -> SPoint:
    m = _POINT_RE.match(text)
    if not m:
        raise ValueError(f"not a point: {text!r}")
    if m.group("rx") is not None:
        return R(Fraction(m.group("rx")))
    return B(int(m.group("bm")), Fraction(m.group("bh")))


def format_point(p: SPoint) -> str:
    if p.is_real:
        return f"R({p.base})"
    return f"B({p.base},{p.height})"


@dataclass(frozen=True)
class SInterval:
    """The unique arc between two points of S (a compact interval)."""

    a: SPoint
    b: SPoint

    @property
    def length(self) -> Fraction:
        return dist(self.a, self.b)

    def segments(self):
        """Chart decomposition walking from a to b.

        Yields ('branch', m, h_from, h_to) and ('real', x_from, x_to) pieces;
        degenerate pieces are skipped.  At most three segments.
        """
        a, b = self.a, self.b
        if a.height > 0 and b.height > 0 and a.base == b.base:
            yield ("branch", a.base, a.height, b.height)
            return
        out = []
        if a.height > 0:
            out.append(("branch", a.base, a.height, ZERO))
        if a.base != b.base:
            out.append(("real", a.base, b.base))
        if b.height > 0:
            out.append(("branch", b.base, ZERO, b.height))
        yield from out

    def contains(self, p: SPoint) -> bool:
        for seg in self.segments():
            if seg[0] == "branch":
                _, m, h1, h2 = seg
                lo, hi = min(h1, h2), max(h1, h2)
                if p.base == m and lo <= p.height <= hi:
                    return True
            else:
                _, x1, x2 = seg
                lo, hi = min(x1, x2), max(x1, x2)
                if p.is_real and lo <= p.base <= hi:
                    return True
        return p == self.a or p == self.b

    def point_at(self, t: Fraction) -> SPoint:
        """Point at taxicab arclength t from endpoint a (0 <= t <= length)."""
        if t < 0 or t > self.length:
            raise ValueError(f"arclength {t} outside [0, {self.length}]")
        for seg in self.segments():
            if seg[0] == "branch":
                _, m, h1, h2 = seg
                seglen = abs(h2 - h1)
                if t <= seglen:
                    h = h1 + (1 if h2 > h1 else -1) * t
                    return B(m, h) if h > 0 else R(m)
                t -= seglen
            else:
                _, x1, x2 = seg
                seglen = abs(x2 - x1)
                if t <= seglen:
                    return R(x1 + (1 if x2 > x1 else -1) * t)
                t -= seglen
        return self.b

    def position_of(self, p: SPoint) -> Fraction:
        """Arclength of p from endpoint a; p must lie on the arc."""
        t = ZERO
        for seg in self.segments():
            if seg[0] == "branch":
                _, m, h1, h2 = seg
                lo, hi = min(h1, h2), max(h1, h2)
                if p.base == m and not p.is_real and lo <= p.height <= hi:
                    return t + abs(p.height - h1)
                if p.is_real and p.base == m and lo == 0:
                    return t + abs(0 - h1)
                t += abs(h2 - h1)
            else:
                _, x1, x2 = seg
                lo, hi = min(x1, x2), max(x1, x2)
                if p.is_real and lo <= p.base <= hi:
                    return t + abs(p.base - x1)
                t += abs(x2 - x1)
        raise ValueError(f"{p} not on {self}")

    def translate(self, k: int) -> "SInterval":
        return SInterval(self.a.translate(k), self.b.translate(k))

    def __repr__(self) -> str:
        return f"hull({self.a}, {self.b})"


def hull(p: SPoint, q: SPoint) -> SInterval:
    """Convex hull of two points: the unique arc joining them."""
    return SInterval(p, q)


def median(x: SPoint, y: SPoint, z: SPoint) -> SPoint:
    """The unique point lying on all three pairwise arcs.

    In an R-tree the median sits on hull(x,y) at arclength
    (d(x,y) + d(x,z) - d(y,z)) / 2 from x.
    """
    t = (dist(x, y) + dist(x, z) - dist(y, z)) / 2
    return hull(x, y).point_at(t)


def retract_to(I: SInterval, p: SPoint) -> SPoint:
    """Nearest-point retraction of S onto the interval I."""
    return median(I.a, I.b, p)


def interior_contains_branchpoint(I: SInterval) -> bool:
    """True iff some integer point R(m) lies in the interior of the arc.

    Every integer has valence 3 in S, so these are exactly the branching
    points of S; basic intervals must avoid them.
    """
    candidates = set()
    for seg in I.segments():
        if seg[0] == "branch":
            candidates.add(int(seg[1]))
        else:
            _, x1, x2 = seg
            lo, hi = min(x1, x2), max(x1, x2)
            m = lo.numerator // lo.denominator
            while m <= hi:
                if m >= lo:
                    candidates.add(m)
                m += 1
    for m in sorted(candidates):
        pt = R(m)
        if pt != I.a and pt != I.b and I.contains(pt):
            return True
    return False


@dataclass(frozen=True)
class OrderedInterval:
    """An interval with one of its two linear orders selected.

    The default order is ascending chart coordinate (real coordinate on R,
    height on a branch); ``reversed_order`` selects the opposite one.
    """

    interval: SInterval
    reversed_order: bool = False

    def flip(self) -> "OrderedInterval":
        return OrderedInterval(self.interval, not self.reversed_order)
