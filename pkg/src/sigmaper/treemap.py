"""Markov self-maps of finite subtrees of S and their true period sets.

Domains are trees of the shape [rmin, rmax] u (full branches over the
integers inside): this covers interval maps ([0,1], no branches), the 3-star
Y_0, and the orbit trees T_P.  The analysis mirrors the Markov machinery for
liftings but with absolute coverings (no displacements, no mod 1): closed
walks bound the candidate true periods, loops are solved exactly, and
minimality is checked pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotTrueOrbit
from .periods import TruncatedPeriodSet, _Budget, DEFAULT_BUDGET
from .sigmamap import PiecewiseAffineLifting
from .space import B, R, SInterval, SPoint, ZERO, ONE, hull

Rat = Fraction


@dataclass(frozen=True)
class TreeDomain:
    rmin: Fraction
    rmax: Fraction
    branch_tops: tuple[tuple[int, Fraction], ...]  # (base, top height)

    def contains(self, p: SPoint) -> bool:
        if p.height > 0:
            top = dict(self.branch_tops).get(int(p.base))
            return top is not None and p.height <= top
        return self.rmin <= p.base <= self.rmax

    def branches(self) -> list[int]:
        return [b for b, _ in self.branch_tops]

    def describe(self) -> str:
        bs = ",".join(f"B_{b}" for b, _ in self.branch_tops)
        return f"[{self.rmin},{self.rmax}] u {{{bs}}}"


@dataclass(frozen=True)
class TreePiece:
    index: int
    kind: str            # 'real' or 'branch'
    branch: int          # base integer for branch pieces, 0 for real
    lo: Fraction
    hi: Fraction

    @property
    def a(self) -> SPoint:
        if self.kind == "real":
            return R(self.lo)
        return B(self.branch, self.lo) if self.lo > 0 else R(self.branch)

    @property
    def b(self) -> SPoint:
        return R(self.hi) if self.kind == "real" else B(self.branch, self.hi)

    @property
    def chart_len(self) -> Fraction:
        return self.hi - self.lo

    def chart_point(self, u: Fraction) -> SPoint:
        if self.kind == "real":
            return R(u)
        return B(self.branch, u) if u > 0 else R(self.branch)


class TreeMarkovMap:
    """A continuous self-map of a TreeDomain, affine between its nodes."""

    def __init__(self, domain: TreeDomain, images: dict):
        self.domain = domain
        self.images = dict(images)
        for p, q in self.images.items():
            if not domain.contains(p) or not domain.contains(q):
                raise ValueError(f"{p} -> {q} leaves the domain")
        self.real_nodes = sorted(p.base for p in self.images if p.is_real)
        self.branch_nodes = {
            b: sorted(p.height for p in self.images if p.height > 0 and p.base == b)
            for b in domain.branches()
        }
        self._check_closed()

    def _check_closed(self):
        need = {R(self.domain.rmin), R(self.domain.rmax)}
        for b, top in self.domain.branch_tops:
            need.add(R(b))
            need.add(B(b, top))
        missing = [p for p in need if p not in self.images]
        if missing:
            raise ValueError(f"tree map lacks boundary nodes: {missing}")

    def pieces(self) -> list[TreePiece]:
        out = []
        for x1, x2 in zip(self.real_nodes, self.real_nodes[1:]):
            out.append(TreePiece(len(out), "real", 0, x1, x2))
        for b in self.domain.branches():
            hs = [ZERO] + self.branch_nodes.get(b, [])
            for h1, h2 in zip(hs, hs[1:]):
                out.append(TreePiece(len(out), "branch", b, h1, h2))
        return out

    def eval(self, p: SPoint) -> SPoint:
        img = self.images.get(p)
        if img is not None:
            return img
        if p.is_real:
            xs = self.real_nodes
            for x1, x2 in zip(xs, xs[1:]):
                if x1 < p.base < x2:
                    return self._interp(R(x1), R(x2), (p.base - x1) / (x2 - x1))
            raise ValueError(f"{p} outside the domain")
        hs = [ZERO] + self.branch_nodes.get(int(p.base), [])
        for h1, h2 in zip(hs, hs[1:]):
            if h1 < p.height < h2:
                a = B(p.base, h1) if h1 > 0 else R(p.base)
                return self._interp(a, B(p.base, h2), (p.height - h1) / (h2 - h1))
        raise ValueError(f"{p} outside the domain")

    def _interp(self, a: SPoint, b: SPoint, lam: Fraction) -> SPoint:
        fa, fb = self.images[a], self.images[b]
        arc = hull(fa, fb)
        return arc.point_at(lam * arc.length)

    def iterate(self, p: SPoint, n: int) -> SPoint:
        for _ in range(n):
            p = self.eval(p)
        return p


# ---------------------------------------------------------------------------
# covering graph and loops (absolute, no displacements)


@dataclass(frozen=True)
class TreeEdge:
    src: int
    dst: int
    u1: Fraction
    u2: Fraction
    slope: Fraction
    icept: Fraction


def _piece_arc(tmap: TreeMarkovMap, I: TreePiece) -> SInterval:
    return hull(tmap.images[I.a], tmap.images[I.b])


def _arc_covers(H: SInterval, J: TreePiece) -> bool:
    run = None
    stubs = {}
    for seg in H.segments():
        if seg[0] == "real":
            _, x1, x2 = seg
            run = (min(x1, x2), max(x1, x2))
        else:
            _, m, h1, h2 = seg
            stubs[int(m)] = (min(h1, h2), max(h1, h2))
    if J.kind == "real":
        return run is not None and run[0] <= J.lo and J.hi <= run[1]
    rng = stubs.get(J.branch)
    if rng is None:
        return False
    bot, top = rng
    return (bot == 0 or bot <= J.lo) and J.hi <= top


def tree_graph(tmap: TreeMarkovMap):
    pieces = tmap.pieces()
    edges = []
    out: dict[int, list] = {}
    for I in pieces:
        H = _piece_arc(tmap, I)
        if H.length == 0:
            continue
        for J in pieces:
            if not _arc_covers(H, J):
                continue
            t_lo = H.position_of(J.a)
            t_hi = H.position_of(J.b)
            clen = I.chart_len
            L = H.length
            dv = (J.hi - J.lo) / (t_hi - t_lo)
            slope = L / clen * dv
            icept = J.lo + (-t_lo - L / clen * I.lo) * dv
            u_at = lambda t: I.lo + t * clen / L
            u1, u2 = sorted((u_at(t_lo), u_at(t_hi)))
            e = TreeEdge(I.index, J.index, u1, u2, slope, icept)
            edges.append(e)
            out.setdefault(I.index, []).append(e)
    return pieces, edges, out


def _tree_closed_walk_lengths(pieces, edges, n_max: int) -> set[int]:
    V = len(pieces)
    adj = [[False] * V for _ in range(V)]
    for e in edges:
        adj[e.src][e.dst] = True
    cur = [row[:] for row in adj]
    found = set()
    for n in range(1, n_max + 1):
        if n > 1:
            nxt = [[False] * V for _ in range(V)]
            for u in range(V):
                for w in range(V):
                    if cur[u][w]:
                        for v in range(V):
                            if adj[w][v]:
                                nxt[u][v] = True
            cur = nxt
        if any(cur[v][v] for v in range(V)):
            found.add(n)
    return found


def _tree_verify_period(tmap, x: SPoint, n: int) -> bool:
    cur = x
    for i in range(1, n + 1):
        cur = tmap.eval(cur)
        if i < n and cur == x:
            return False
    return cur == x


def _tree_witness(tmap, pieces, out, n: int, budget: _Budget):
    V = len(pieces)
    back = [set() for _ in range(n + 1)]
    for start in range(V):
        back[0] = {start}
        for r in range(1, n + 1):
            back[r] = set()
            for v in range(start, V):
                for e in out.get(v, ()):
                    if e.dst >= start and e.dst in back[r - 1]:
                        back[r].add(v)
                        break
        if start not in back[n]:
            continue
        stack = [(start, 0, (Rat(1), Rat(0), pieces[start].lo, pieces[start].hi))]
        while stack:
            if not budget.spend():
                return None
            v, t, (S, C, d1, d2) = stack.pop()
            if t == n:
                if v != start:
                    continue
                x = _tree_solutions(pieces[start], S, C, d1, d2, n)
                for cand in x:
                    if not budget.spend(n):
                        return None
                    if _tree_verify_period(tmap, cand, n):
                        return cand
                continue
            rem = n - t - 1
            for e in out.get(v, ()):
                if e.dst < start or e.dst not in back[rem]:
                    continue
                if S > 0:
                    lo, hi = (e.u1 - C) / S, (e.u2 - C) / S
                else:
                    lo, hi = (e.u2 - C) / S, (e.u1 - C) / S
                nd1, nd2 = max(d1, lo), min(d2, hi)
                if nd1 > nd2:
                    continue
                stack.append((e.dst, t + 1,
                              (e.slope * S, e.slope * C + e.icept, nd1, nd2)))
    return None


def _tree_solutions(I0: TreePiece, S, C, d1, d2, n):
    if S == 1:
        if C != 0:
            return []
        span = d2 - d1
        out = [I0.chart_point(d1), I0.chart_point(d2)]
        k = 3 * n + 2
        for j in range(1, k + 1):
            out.append(I0.chart_point(d1 + span * Fraction(j, k + 1)))
        return out
    u = C / (1 - S)
    if d1 <= u <= d2:
        return [I0.chart_point(u)]
    return []


def tree_node_periods(tmap: TreeMarkovMap, n_max: int) -> set[int]:
    periods = set()
    bound = len(tmap.images) + 1
    for node in tmap.images:
        seq = [node]
        cur = node
        for n in range(1, bound + 1):
            cur = tmap.eval(cur)
            if cur == node:
                if n <= n_max:
                    periods.add(n)
                break
            if cur in seq:
                break
            seq.append(cur)
    return periods


def tree_true_periods(tmap: TreeMarkovMap, n_max: int = 20,
                      budget: int = DEFAULT_BUDGET) -> TruncatedPeriodSet:
    """TPer(tmap) within [1..n_max], exactly."""
    members = tree_node_periods(tmap, n_max)
    pieces, edges, out = tree_graph(tmap)
    feasible = _tree_closed_walk_lengths(pieces, edges, n_max)
    undecided = set()
    for n in range(1, n_max + 1):
        if n in members or n not in feasible:
            continue
        bud = _Budget(budget)
        x = _tree_witness(tmap, pieces, out, n, bud)
        if x is not None:
            members.add(n)
        elif bud.exhausted:
            undecided.add(n)
    return TruncatedPeriodSet(n_max, frozenset(members), not undecided,
                              frozenset(undecided))


# ---------------------------------------------------------------------------
# builders


def interval_map_tree(dots) -> TreeMarkovMap:
    """Connect-the-dots interval self-map of [0,1] as a tree map."""
    imgs = {R(x): R(y) for x, y in dots}
    if R(ZERO) not in imgs:
        raise ValueError("interval map needs a node at 0")
    if R(ONE) not in imgs:
        imgs[R(ONE)] = imgs[R(ZERO)]
    dom = TreeDomain(ZERO, ONE, ())
    return TreeMarkovMap(dom, imgs)


def star_map_tree(star_nodes) -> TreeMarkovMap:
    """Markov self-map of the 3-star Y_0 = [-1/3, 1/3] u B_0."""
    third = Rat(1, 3)
    imgs = dict(star_nodes)
    for req in (R(-third), R(third), R(ZERO), B(0, 1)):
        if req not in imgs:
            raise ValueError(f"star map must define the image of {req}")
    dom = TreeDomain(-third, third, ((0, ONE),))
    return TreeMarkovMap(dom, imgs)


@dataclass(frozen=True)
class OrbitTreeRestriction:
    domain: TreeDomain
    tree_map: TreeMarkovMap
    true_periods: TruncatedPeriodSet


def orbit_tree_restriction(F: PiecewiseAffineLifting, orbit, n_max: int = 20,
                           budget: int = DEFAULT_BUDGET) -> OrbitTreeRestriction:
    """T_P and F_P = retract o F for a true periodic orbit P.

    T_P spans [min Re P, max Re P] together with every full branch over an
    integer in that range; F_P clamps anything mapped outside back to the
    nearest real endpoint.  Returns the tree, the Markov restriction and
    TPer(F_P) on [1..n_max].
    """
    if orbit.shift != 0:
        raise NotTrueOrbit("orbit tree restriction needs a true orbit")
    pts = [orbit.representative]
    cur = orbit.representative
    for _ in range(orbit.period - 1):
        cur = F.eval(cur)
        pts.append(cur)
    res = [p.re for p in pts]
    rmin, rmax = min(res), max(res)
    lo_i = rmin.__ceil__()
    hi_i = rmax.__floor__()
    dom = TreeDomain(rmin, rmax, tuple((i, ONE) for i in range(lo_i, hi_i + 1)))

    def clamp(y: SPoint) -> SPoint:
        if dom.contains(y):
            return y
        return R(rmin) if y.re < rmin else R(rmax)

    # seed nodes: orbit, boundary, integers, branch tops, lifting-node grid
    nodes = set(pts)
    nodes.add(R(rmin))
    nodes.add(R(rmax))
    for i in range(lo_i, hi_i + 1):
        nodes.add(R(i))
        nodes.add(B(i, 1))
    for q in F.nodes:
        for k in range(rmin.__floor__() - 1, rmax.__ceil__() + 2):
            cand = q.translate(k)
            if dom.contains(cand):
                nodes.add(cand)
    # close under F_P
    frontier = list(nodes)
    while frontier:
        x = frontier.pop()
        y = clamp(F.eval(x))
        if y not in nodes:
            nodes.add(y)
            frontier.append(y)
    # subdivide pieces whose image arc crosses the real boundary
    for _ in range(8):
        extra = set()
        reals = sorted(p.base for p in nodes if p.is_real)
        for x1, x2 in zip(reals, reals[1:]):
            extra |= _crossings(F, dom, "real", 0, x1, x2)
        for b in dom.branches():
            hs = [ZERO] + sorted(p.height for p in nodes if p.height > 0 and p.base == b)
            for h1, h2 in zip(hs, hs[1:]):
                extra |= _crossings(F, dom, "branch", b, h1, h2)
        new = extra - nodes
        if not new:
            break
        nodes |= new
        frontier = list(new)
        while frontier:
            x = frontier.pop()
            y = clamp(F.eval(x))
            if y not in nodes:
                nodes.add(y)
                frontier.append(y)
    images = {x: clamp(F.eval(x)) for x in nodes}
    tmap = TreeMarkovMap(dom, images)
    periods = tree_true_periods(tmap, n_max, budget)
    return OrbitTreeRestriction(dom, tmap, periods)


def _crossings(F, dom: TreeDomain, kind: str, branch: int,
               lo: Fraction, hi: Fraction) -> set[SPoint]:
    """Preimages, within one piece, of the real boundary of the tree."""
    if kind == "real":
        a, b = R(lo), R(hi)
    else:
        a = B(branch, lo) if lo > 0 else R(branch)
        b = B(branch, hi)
    fa, fb = F.eval(a), F.eval(b)
    H = hull(fa, fb)
    L = H.length
    if L == 0:
        return set()
    out = set()
    for level in (dom.rmin, dom.rmax):
        target = R(level)
        if H.contains(target):
            lam = H.position_of(target) / L
            u = lo + lam * (hi - lo)
            if kind == "real":
                out.add(R(u))
            else:
                out.add(B(branch, u) if u > 0 else R(branch))
    return out
