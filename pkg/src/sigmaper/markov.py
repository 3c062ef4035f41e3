"""Basic intervals, covering detection and the displacement/sign Markov graph.

Vertices are the basic intervals of the node set inside the fundamental
domain: real intervals between consecutive real nodes (the last one reaching
R(1) = R(0)+1) and branch intervals between consecutive heights of B_0.  An
edge I ->(k, eps) J records that F(I) contains J + k, realized by a
subinterval of I mapped affinely onto J + k with orientation eps.  Since the
pieces are monotone affine, each (I, J, k) carries exactly one sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotALoop
from .sigmamap import PiecewiseAffineLifting
from .space import B, R, SInterval, SPoint, ZERO, ONE, hull, OrderedInterval


@dataclass(frozen=True)
class BasicInterval:
    """One basic interval of the partition, in fundamental-domain chart."""

    index: int
    kind: str              # 'real' or 'branch'
    lo: Fraction
    hi: Fraction
    name: str

    @property
    def a(self) -> SPoint:
        return R(self.lo) if self.kind == "real" else B(0, self.lo)

    @property
    def b(self) -> SPoint:
        return R(self.hi) if self.kind == "real" else B(0, self.hi)

    def as_interval(self, k: int = 0) -> SInterval:
        return hull(self.a.translate(k), self.b.translate(k))

    @property
    def chart_len(self) -> Fraction:
        return self.hi - self.lo

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class BasicPartition:
    intervals: tuple[BasicInterval, ...]

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __getitem__(self, i):
        return self.intervals[i]

    def by_name(self, name: str) -> BasicInterval:
        for itv in self.intervals:
            if itv.name == name:
                return itv
        raise KeyError(name)

    def locate(self, p: SPoint) -> list[BasicInterval]:
        """All basic intervals containing the fundamental-domain point p."""
        out = []
        for itv in self.intervals:
            if p.is_real and itv.kind == "real" and itv.lo <= p.base <= itv.hi:
                out.append(itv)
            elif not p.is_real and itv.kind == "branch" and itv.lo <= p.height <= itv.hi:
                out.append(itv)
            elif p == R(ZERO) and itv.kind == "branch" and itv.lo == 0:
                out.append(itv)
        return out


def basic_intervals(nodes, interval_names=None) -> BasicPartition:
    """Partition of the fundamental domain determined by a node set.

    nodes: SPoints with re in [0,1); R(0) is added if missing.  Real basic
    intervals run between consecutive real nodes and wrap to R(1); branch
    intervals stack from the base to each next height up to B(0,1).  Default
    names are A_1..A_k left to right on R and B_0 (or B_0:j) on the branch.
    """
    reals = sorted({p.base for p in nodes if p.is_real} | {ZERO})
    heights = sorted({p.height for p in nodes if not p.is_real} | {ONE})
    names = dict(interval_names or {})
    out = []
    bounds = reals + [ONE]
    for i in range(len(bounds) - 1):
        name = names.get(("real", i), f"A_{i + 1}")
        out.append(BasicInterval(len(out), "real", bounds[i], bounds[i + 1], name))
    hb = [ZERO] + heights
    many = len(heights) > 1
    for j in range(len(hb) - 1):
        default = f"B_0:{j + 1}" if many else "B_0"
        name = names.get(("branch", j), default)
        out.append(BasicInterval(len(out), "branch", hb[j], hb[j + 1], name))
    return BasicPartition(tuple(out))


def partition_of(F: PiecewiseAffineLifting) -> BasicPartition:
    return basic_intervals(F.nodes, F.interval_names)


def image_arc(F: PiecewiseAffineLifting, I: BasicInterval) -> SInterval:
    """F(I): the arc between the endpoint images (pieces are affine-onto)."""
    fa = F.eval(I.a)
    fb = F.eval(I.b)
    return hull(fa, fb)


def _arc_parts(H: SInterval):
    """(real_run, stubs): real_run = (lo, hi) or None; stubs = {base: top}."""
    run = None
    stubs = {}
    for seg in H.segments():
        if seg[0] == "real":
            _, x1, x2 = seg
            run = (min(x1, x2), max(x1, x2))
        else:
            _, m, h1, h2 = seg
            top = max(h1, h2)
            bot = min(h1, h2)
            stubs[m] = (bot, top)
    return run, stubs


def covers(F: PiecewiseAffineLifting, I: BasicInterval, J: BasicInterval) -> set[int]:
    """All integers k with F(I) containing J + k (degenerate pieces: none)."""
    H = image_arc(F, I)
    if H.length == 0:
        return set()
    run, stubs = _arc_parts(H)
    ks = set()
    if J.kind == "real":
        if run is not None:
            lo, hi = run
            k = (lo - J.lo).__ceil__()
            while J.hi + k <= hi:
                if J.lo + k >= lo:
                    ks.add(int(k))
                k += 1
    else:
        for m, (bot, top) in stubs.items():
            if bot == 0 and J.hi <= top:
                ks.add(int(m))
            elif bot > 0 and bot <= J.lo and J.hi <= top:
                # arc inside a single branch
                ks.add(int(m))
    return ks


def signed_cover(F: PiecewiseAffineLifting, I, J, k: int) -> set[str]:
    """Achievable signs of the covering I -> J + k; subset of {'+','-'}.

    I and J may be BasicIntervals (standard ascending-chart orders) or
    OrderedIntervals wrapping them.
    """
    flip = False
    if isinstance(I, OrderedInterval):
        flip ^= I.reversed_order
        I = I.interval
    if isinstance(J, OrderedInterval):
        flip ^= J.reversed_order
        J = J.interval
    if not isinstance(I, BasicInterval) or not isinstance(J, BasicInterval):
        raise TypeError("signed_cover expects basic intervals of the partition")
    if k not in covers(F, I, J):
        return set()
    H = image_arc(F, I)
    t_lo = H.position_of(J.a.translate(k))
    t_hi = H.position_of(J.b.translate(k))
    sign = "+" if t_lo < t_hi else "-"
    if flip:
        sign = "-" if sign == "+" else "+"
    return {sign}


@dataclass(frozen=True)
class MGEdge:
    src: int
    dst: int
    disp: int
    sign: str
    # chart-affine realization: u in [u1,u2] -> slope*u + icept, onto J chart
    u1: Fraction
    u2: Fraction
    slope: Fraction
    icept: Fraction

    def key(self):
        return (self.src, self.dst, self.disp)


@dataclass(frozen=True)
class MarkovGraph:
    partition: BasicPartition
    edges: tuple[MGEdge, ...]
    degree: int
    out: dict = field(compare=False, default_factory=dict)

    def out_edges(self, v: int) -> list[MGEdge]:
        return self.out.get(v, [])

    def find_edge(self, src: int, dst: int, disp: int) -> MGEdge:
        for e in self.out_edges(src):
            if e.dst == dst and e.disp == disp:
                return e
        raise KeyError((src, dst, disp))


def _edge_affine(F, I: BasicInterval, J: BasicInterval, k: int):
    """Chart map u -> v of the covering I -> J+k (affine bijection onto J)."""
    H = image_arc(F, I)
    L = H.length
    t_lo = H.position_of(J.a.translate(k))
    t_hi = H.position_of(J.b.translate(k))
    # t(u) = L * (u - I.lo) / |I|
    clen = I.chart_len
    # v(t) affine with v(t_lo) = J.lo, v(t_hi) = J.hi
    dv = (J.hi - J.lo) / (t_hi - t_lo)
    # v(u) = J.lo + (t(u) - t_lo) * dv
    slope = L / clen * dv
    icept = J.lo + (-t_lo - L / clen * I.lo) * dv
    u_at = lambda t: I.lo + t * clen / L
    u1, u2 = sorted((u_at(t_lo), u_at(t_hi)))
    return u1, u2, slope, icept


def markov_graph(F: PiecewiseAffineLifting) -> MarkovGraph:
    """Complete covering graph of F on the fundamental-domain partition."""
    part = partition_of(F)
    edges = []
    for I in part:
        for J in part:
            for k in sorted(covers(F, I, J)):
                sgn = signed_cover(F, I, J, k)
                u1, u2, slope, icept = _edge_affine(F, I, J, k)
                edges.append(
                    MGEdge(I.index, J.index, k, next(iter(sgn)), u1, u2, slope, icept)
                )
    edges.sort(key=lambda e: (e.src, e.dst, e.disp))
    out: dict[int, list] = {}
    for e in edges:
        out.setdefault(e.src, []).append(e)
    return MarkovGraph(part, tuple(edges), F.degree, out)


def loop_sign(graph: MarkovGraph, loop, orientations=None) -> set[str]:
    """Sign(s) of a closed edge sequence; the product of the edge signs.

    loop: list of (src, dst, disp) triples or MGEdge; orientations optionally
    maps vertex index -> bool (True = reversed order), under which each edge
    sign flips once per reversed endpoint.  The loop sign is independent of
    the choice (make-coverings-positive lemma), which tests exercise.
    """
    edges = []
    for item in loop:
        e = item if isinstance(item, MGEdge) else graph.find_edge(*item)
        edges.append(e)
    if not edges:
        raise NotALoop("empty loop")
    for e1, e2 in zip(edges, edges[1:]):
        if e1.dst != e2.src:
            raise NotALoop(f"edge into {e1.dst} followed by edge from {e2.src}")
    if edges[-1].dst != edges[0].src:
        raise NotALoop("sequence does not close")
    orientations = orientations or {}
    total = 1
    for e in edges:
        s = 1 if e.sign == "+" else -1
        if orientations.get(e.src, False):
            s = -s
        if orientations.get(e.dst, False):
            s = -s
        total *= s
    return {"+" if total > 0 else "-"}


def to_dot(graph: MarkovGraph) -> str:
    """Deterministic DOT export; edge label 'k/sign'."""
    lines = ["digraph markov {"]
    for I in graph.partition:
        lines.append(f'  "{I.name}";')
    for e in graph.edges:
        src = graph.partition[e.src].name
        dst = graph.partition[e.dst].name
        lines.append(f'  "{src}" -> "{dst}" [label="{e.disp}/{e.sign}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
