"""Markov piecewise-affine liftings of sigma-maps and their evaluation.

A lifting F of degree d is described by finitely many nodes in the
fundamental domain (re in [0,1), always containing R(0) and B(0,1)) together
with the image of every node; F(z+1) = F(z) + d extends it to all of S, and
on each basic interval between consecutive nodes F interpolates affinely in
taxicab arclength along the arc joining the endpoint images.  Because every
node image lies on the node grid (node set + Z), the data is Markov and all
downstream computations are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DiscontinuousAtBase,
    DuplicateNode,
    MapSyntaxError,
    MissingNode,
    NotMarkov,
)
from .space import (
    B,
    R,
    SInterval,
    SPoint,
    ZERO,
    ONE,
    dist,
    format_point,
    hull,
    mod1,
    parse_point,
    re,
)


@dataclass(frozen=True)
class PiecewiseAffineLifting:
    """Finite Markov description of a continuous lifting F in L_d(S)."""

    degree: int
    real_nodes: tuple[Fraction, ...]      # ascending, first is 0
    branch_nodes: tuple[Fraction, ...]    # ascending heights, last is 1
    images: dict                          # canonical node SPoint -> SPoint
    interval_names: dict = field(default_factory=dict, compare=False)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseAffineLifting):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.real_nodes == other.real_nodes
            and self.branch_nodes == other.branch_nodes
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.degree, self.real_nodes, self.branch_nodes))

    @property
    def nodes(self) -> list[SPoint]:
        out = [R(x) for x in self.real_nodes]
        out += [B(0, h) for h in self.branch_nodes]
        return out

    def image_of_node(self, p: SPoint) -> SPoint:
        return self.images[p]

    def eval(self, p: SPoint) -> SPoint:
        """Exact evaluation of F at any point of S."""
        q, k = mod1(p)
        return _eval_fund(self, q).translate(k * self.degree)

    def iterate(self, p: SPoint, n: int) -> SPoint:
        if n < 0:
            raise ValueError("iterate needs n >= 0")
        for _ in range(n):
            p = self.eval(p)
        return p

    def to_map_text(self) -> str:
        lines = [f"degree {self.degree}"]
        names = {}
        for i, x in enumerate(self.real_nodes):
            names[R(x)] = f"r{i}"
            lines.append(f"node r{i} = {format_point(R(x))}")
        for i, h in enumerate(self.branch_nodes):
            names[B(0, h)] = f"b{i}"
            lines.append(f"node b{i} = {format_point(B(0, h))}")
        for p in self.nodes:
            lines.append(f"image {names[p]} -> {format_point(self.images[p])}")
        return "\n".join(lines) + "\n"


def _eval_fund(F: PiecewiseAffineLifting, q: SPoint) -> SPoint:
    """Evaluate at a fundamental-domain point (re in [0,1))."""
    img = F.images.get(q)
    if img is not None:
        return img
    if q.is_real:
        xs = F.real_nodes
        x = q.base
        for i in range(len(xs) - 1):
            if xs[i] < x < xs[i + 1]:
                return _interp(F, R(xs[i]), R(xs[i + 1]), (x - xs[i]) / (xs[i + 1] - xs[i]))
        # between the last real node and R(1) = R(0) + 1
        x0 = xs[-1]
        a, fa = R(x0), F.images[R(x0)]
        fb = F.images[R(ZERO)].translate(F.degree)
        return _interp_images(fa, fb, (x - x0) / (1 - x0))
    hs = F.branch_nodes
    h = q.height
    if h < hs[0]:
        # between the branch base R(0) and the lowest branch node
        fa = F.images[R(ZERO)]
        fb = F.images[B(0, hs[0])]
        return _interp_images(fa, fb, h / hs[0])
    for i in range(len(hs) - 1):
        if hs[i] < h < hs[i + 1]:
            return _interp(F, B(0, hs[i]), B(0, hs[i + 1]), (h - hs[i]) / (hs[i + 1] - hs[i]))
    raise AssertionError(f"point {q} not located")


def _interp(F: PiecewiseAffineLifting, a: SPoint, b: SPoint, lam: Fraction) -> SPoint:
    return _interp_images(F.images[a], F.images[b], lam)


def _interp_images(fa: SPoint, fb: SPoint, lam: Fraction) -> SPoint:
    """Affine in arclength along the image arc from fa to fb."""
    arc = hull(fa, fb)
    return arc.point_at(lam * arc.length)


def build_lifting(degree: int, node_image_pairs, interval_names=None) -> PiecewiseAffineLifting:
    """Validate node data and assemble a lifting.

    node_image_pairs: iterable of (node, image) SPoint pairs; node re-parts
    must lie in [0,1); R(0) and B(0,1) must be present.  Raises DuplicateNode,
    MissingNode, NotMarkov or DiscontinuousAtBase on bad data.
    """
    images = {}
    for node, img in node_image_pairs:
        if not (0 <= node.re < 1):
            raise DiscontinuousAtBase(f"node {node} outside the fundamental domain")
        if node in images:
            if images[node] != img:
                raise DiscontinuousAtBase(f"node {node} assigned two images")
            raise DuplicateNode(f"node {node} listed twice")
        images[node] = img
    if R(ZERO) not in images:
        raise MissingNode("R(0) must be a node")
    if B(0, 1) not in images:
        raise MissingNode("B(0,1) must be a node")
    node_set = set(images)
    for node, img in images.items():
        q, _ = mod1(img)
        if q not in node_set:
            raise NotMarkov(f"image {img} of node {node} is off the node grid")
    real_nodes = tuple(sorted(p.base for p in node_set if p.is_real))
    branch_nodes = tuple(sorted(p.height for p in node_set if not p.is_real))
    return PiecewiseAffineLifting(
        degree=int(degree),
        real_nodes=real_nodes,
        branch_nodes=branch_nodes,
        images=images,
        interval_names=dict(interval_names or {}),
    )


class DerivedMapHandle:
    """Evaluation-only views of a lifting: F + k, F^q - p, and F_0."""

    def __init__(self, base: PiecewiseAffineLifting, form: tuple):
        self.base = base
        self.form = form

    @property
    def degree(self) -> int:
        kind = self.form[0]
        if kind == "shift":
            return self.base.degree
        if kind == "power_shift":
            return self.base.degree ** self.form[1]
        return 0  # F_0 has degree 0

    def eval(self, p: SPoint) -> SPoint:
        kind = self.form[0]
        if kind == "shift":
            return self.base.eval(p).translate(self.form[1])
        if kind == "power_shift":
            q, shift = self.form[1], self.form[2]
            return self.base.iterate(p, q).translate(-shift)
        return f0(self.base, p)

    def iterate(self, p: SPoint, n: int) -> SPoint:
        for _ in range(n):
            p = self.eval(p)
        return p


def shift_lifting(F: PiecewiseAffineLifting, k: int) -> DerivedMapHandle:
    """The lifting F + k (same sigma-map, different lift)."""
    return DerivedMapHandle(F, ("shift", int(k)))


def shifted_lifting(F: PiecewiseAffineLifting, k: int) -> PiecewiseAffineLifting:
    """F + k rebuilt as a first-class Markov lifting (images shifted by k)."""
    pairs = [(node, img.translate(k)) for node, img in F.images.items()]
    return build_lifting(F.degree, pairs, F.interval_names)


def power_shift_eval(F: PiecewiseAffineLifting, q: int, p: int, x: SPoint) -> SPoint:
    """Evaluate F^q - p at x."""
    if q < 1:
        raise ValueError("power_shift needs q >= 1")
    return F.iterate(x, q).translate(-p)


def power_shift(F: PiecewiseAffineLifting, q: int, p: int) -> DerivedMapHandle:
    return DerivedMapHandle(F, ("power_shift", int(q), int(p)))


def f0(F: PiecewiseAffineLifting, p: SPoint) -> SPoint:
    """Branch projection F_0(x) = F(x) - Re(F(x)), landing in B_0 u {R(0)}."""
    y = F.eval(p)
    if y.is_real:
        return R(ZERO)
    return B(0, y.height)


def f0_handle(F: PiecewiseAffineLifting) -> DerivedMapHandle:
    return DerivedMapHandle(F, ("f0",))


def rho_estimate(F, p: SPoint, n: int) -> Fraction:
    """Finite-n rotation quotient (Re(F^n(p)) - Re(p)) / n, exact."""
    if n < 1:
        raise ValueError("rho_estimate needs n >= 1")
    q = p
    for _ in range(n):
        q = F.eval(q)
    return Fraction(q.re - p.re, n)


# ---------------------------------------------------------------------------
# map file format


def parse_map(text: str) -> PiecewiseAffineLifting:
    """Parse the line-oriented map format; errors carry line numbers."""
    degree = None
    points = {}
    images = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        kind = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
        if kind == "degree":
            try:
                degree = int(rest.strip())
            except ValueError:
                raise MapSyntaxError(lineno, f"bad degree {rest!r}")
        elif kind == "node":
            if "=" not in rest:
                raise MapSyntaxError(lineno, "expected 'node NAME = POINT'")
            name, ptext = (s.strip() for s in rest.split("=", 1))
            if name in points:
                raise MapSyntaxError(lineno, f"node name {name!r} reused")
            try:
                pt = parse_point(ptext)
            except ValueError as exc:
                raise MapSyntaxError(lineno, str(exc))
            if any(pt == q for q in points.values()):
                raise DuplicateNode(f"line {lineno}: point {pt} already a node")
            points[name] = pt
        elif kind == "image":
            if "->" not in rest:
                raise MapSyntaxError(lineno, "expected 'image NAME -> POINT'")
            name, ptext = (s.strip() for s in rest.split("->", 1))
            if name not in points:
                raise MapSyntaxError(lineno, f"unknown node {name!r}")
            try:
                images[name] = parse_point(ptext)
            except ValueError as exc:
                raise MapSyntaxError(lineno, str(exc))
        else:
            raise MapSyntaxError(lineno, f"unknown directive {kind!r}")
    if degree is None:
        raise MapSyntaxError(0, "missing 'degree' line")
    missing = sorted(set(points) - set(images))
    if missing:
        raise MapSyntaxError(0, f"nodes without images: {', '.join(missing)}")
    pairs = [(points[name], images[name]) for name in points]
    return build_lifting(degree, pairs)
