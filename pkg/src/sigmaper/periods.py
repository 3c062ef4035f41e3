"""Exact enumeration of periods (mod 1), orbit classification and blocks.

Strategy: periodic (mod 1) points are either pinned to nodes (found by exact
node-orbit iteration) or carried by loops of the Markov graph.  For each
candidate period n a displacement-aware dynamic program first decides whether
a closed walk of length n (with the required displacement sum, when a
rotation number is prescribed) exists at all; absence certifies the period is
missing.  When walks exist, a pruned depth-first search enumerates loops,
solves the composed affine piece maps exactly, and checks minimality of every
candidate point by exact orbit computation - loop primitivity alone is never
trusted.  Identity composites (interval families) are sampled at enough
points to beat the finitely many degenerate solutions.  The search is capped
by an explicit budget; exceeding it marks the result incomplete instead of
silently truncating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadRotationData, NotALoop, NotAStarOrbit, NotTrueOrbit
from .markov import BasicInterval, MarkovGraph, MGEdge, markov_graph
from .sigmamap import PiecewiseAffineLifting, power_shift
from .space import B, R, SInterval, SPoint, ZERO, hull, mod1

DEFAULT_BUDGET = 400_000


@dataclass(frozen=True)
class TruncatedPeriodSet:
    """Per(F) (or Per(alpha,F)) intersected with [1..n_max]."""

    n_max: int
    members: frozenset[int]
    complete: bool = True
    undecided: frozenset[int] = frozenset()

    def as_sorted(self) -> list[int]:
        return sorted(self.members)

    def report(self, label: str = "periods") -> str:
        body = ",".join(str(n) for n in self.as_sorted())
        text = f"{label}[1..{self.n_max}] = {{{body}}}"
        if not self.complete:
            text += f"  INCOMPLETE undecided={sorted(self.undecided)}"
        return text

    def __contains__(self, n: int) -> bool:
        return n in self.members

    def __eq__(self, other):
        if isinstance(other, TruncatedPeriodSet):
            return self.n_max == other.n_max and self.members == other.members
        if isinstance(other, (set, frozenset)):
            return self.members == frozenset(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n_max, self.members))


@dataclass(frozen=True)
class LiftedOrbit:
    """A periodic (mod 1) orbit with exact data and classification flags."""

    representative: SPoint          # re in [0,1)
    period: int                     # period mod 1
    shift: int                      # F^period(x) = x + shift
    rotation: Fraction              # shift / period (rotation number if d=1)
    points: tuple[SPoint, ...]      # mod-1 orbit points, orbit order
    lives_in_branches: bool
    large: bool

    def point_set(self) -> frozenset:
        return frozenset(self.points)


def _in_branches(p: SPoint) -> bool:
    return p.height > 0 or p.base.denominator == 1


def _integer_translate(p: SPoint, q: SPoint):
    """Return k with p = q + k, or None."""
    if p.height != q.height:
        return None
    d = p.base - q.base
    if d.denominator != 1:
        return None
    return int(d)


def orbit_from_point(F, x: SPoint, n_max: int) -> LiftedOrbit | None:
    """Build the lifted orbit through x if its period mod 1 is <= n_max."""
    rep, _ = mod1(x)
    pts = [rep]
    cur = rep
    for n in range(1, n_max + 1):
        cur = F.eval(cur)
        k = _integer_translate(cur, rep)
        if k is not None:
            return _finish_orbit(F, rep, n, k, pts)
        pts.append(mod1(cur)[0])
    return None


def _finish_orbit(F, rep: SPoint, n: int, shift: int, mod_pts) -> LiftedOrbit:
    true_pts = [rep]
    cur = rep
    for _ in range(n - 1):
        cur = F.eval(cur)
        true_pts.append(cur)
    lives = all(_in_branches(p) for p in true_pts)
    large = False
    if shift == 0:
        res = [p.re for p in true_pts]
        large = max(res) - min(res) >= 1
    return LiftedOrbit(
        representative=rep,
        period=n,
        shift=shift,
        rotation=Fraction(shift, n),
        points=tuple(mod_pts[:n]),
        lives_in_branches=lives,
        large=large,
    )


def verify_exact_period(F, x: SPoint, n: int):
    """Return the shift m if x has period mod 1 exactly n, else None."""
    cur = x
    for i in range(1, n + 1):
        cur = F.eval(cur)
        k = _integer_translate(cur, x)
        if i < n:
            if k is not None:
                return None
        elif k is None:
            return None
    return _integer_translate(cur, x)


def classify_orbit(F, orbit: LiftedOrbit) -> dict:
    """Recompute the classification flags from the orbit data."""
    rebuilt = _finish_orbit(F, orbit.representative, orbit.period, orbit.shift,
                            list(orbit.points))
    return {
        "lives_in_branches": rebuilt.lives_in_branches,
        "large": rebuilt.large,
    }


# ---------------------------------------------------------------------------
# node orbits


def node_orbit_periods(F: PiecewiseAffineLifting, n_max: int | None = None) -> list[LiftedOrbit]:
    """Periodic (mod 1) orbits through nodes, deduplicated."""
    orbits = []
    seen = set()
    bound = len(F.nodes) + 1
    for node in F.nodes:
        orb = orbit_from_point(F, node, bound)
        if orb is None:
            continue
        if n_max is not None and orb.period > n_max:
            continue
        key = orb.point_set()
        if key in seen:
            continue
        seen.add(key)
        orbits.append(orb)
    return orbits


# ---------------------------------------------------------------------------
# loop solving


@dataclass(frozen=True)
class IntervalFamily:
    """A whole subinterval of fixed points of an identity loop composite."""

    interval: SInterval
    shift: int


@dataclass(frozen=True)
class LoopSolutions:
    points: tuple[tuple[SPoint, int], ...]
    family: IntervalFamily | None


def _chart_point(I: BasicInterval, u: Fraction) -> SPoint:
    if I.kind == "real":
        return R(u)
    return B(0, u) if u > 0 else R(ZERO)


def _compose_loop(graph: MarkovGraph, edges):
    """Compose the chart-affine edge maps; return (S, C, d1, d2, m) or None.

    The composite sends u in [d1,d2] (chart of the first vertex) to S*u + C,
    and the walked point satisfies F^n(x) = x' + m with m the degree-weighted
    displacement sum.
    """
    I0 = graph.partition[edges[0].src]
    S, C = Fraction(1), Fraction(0)
    d1, d2 = I0.lo, I0.hi
    m = 0
    d = graph.degree
    for e in edges:
        # restrict current value S*u + C to the edge domain [e.u1, e.u2]
        if S > 0:
            lo, hi = (e.u1 - C) / S, (e.u2 - C) / S
        else:
            lo, hi = (e.u2 - C) / S, (e.u1 - C) / S
        d1, d2 = max(d1, lo), min(d2, hi)
        if d1 > d2:
            return None
        S, C = e.slope * S, e.slope * C + e.icept
        m = d * m + e.disp
    return S, C, d1, d2, m


def solve_loop_fixed_points(F_or_graph, loop) -> LoopSolutions:
    """Exact fixed points of the affine composite along a closing loop.

    Returns isolated solutions (with their shifts) and, when the composite is
    the identity, the whole admissible subinterval as a family.
    """
    graph = F_or_graph if isinstance(F_or_graph, MarkovGraph) else markov_graph(F_or_graph)
    edges = [e if isinstance(e, MGEdge) else graph.find_edge(*e) for e in loop]
    if not edges:
        raise NotALoop("empty loop")
    for e1, e2 in zip(edges, edges[1:]):
        if e1.dst != e2.src:
            raise NotALoop("edges do not chain")
    if edges[-1].dst != edges[0].src:
        raise NotALoop("sequence does not close")
    comp = _compose_loop(graph, edges)
    if comp is None:
        return LoopSolutions((), None)
    S, C, d1, d2, m = comp
    I0 = graph.partition[edges[0].src]
    if S == 1:
        if C == 0:
            fam = IntervalFamily(hull(_chart_point(I0, d1), _chart_point(I0, d2)), m)
            return LoopSolutions((), fam)
        return LoopSolutions((), None)
    u = C / (1 - S)
    if d1 <= u <= d2:
        return LoopSolutions(((_chart_point(I0, u), m),), None)
    return LoopSolutions((), None)


def _family_candidates(I0: BasicInterval, d1: Fraction, d2: Fraction, n: int):
    """Sample points of an identity family: endpoints plus 3n+2 interior."""
    yield _chart_point(I0, d1)
    yield _chart_point(I0, d2)
    if d1 == d2:
        return
    span = d2 - d1
    k = 3 * n + 2
    for j in range(1, k + 1):
        yield _chart_point(I0, d1 + span * Fraction(j, k + 1))


# ---------------------------------------------------------------------------
# feasibility tables


def closed_walk_lengths(graph: MarkovGraph, n_max: int) -> set[int]:
    """Lengths n <= n_max admitting a closed walk in the covering graph."""
    V = len(graph.partition)
    adj = [[False] * V for _ in range(V)]
    for e in graph.edges:
        adj[e.src][e.dst] = True
    cur = [row[:] for row in adj]
    out = set()
    for n in range(1, n_max + 1):
        if n > 1:
            nxt = [[False] * V for _ in range(V)]
            for u in range(V):
                curu = cur[u]
                for w in range(V):
                    if curu[w]:
                        aw = adj[w]
                        nxtu = nxt[u]
                        for v in range(V):
                            if aw[v]:
                                nxtu[v] = True
            cur = nxt
        if any(cur[v][v] for v in range(V)):
            out.add(n)
    return out


class _SumDP:
    """Bitmask tables for walks with prescribed displacement sums (degree 1)."""

    def __init__(self, graph: MarkovGraph, n_max: int):
        self.graph = graph
        self.n_max = n_max
        kmin = min((e.disp for e in graph.edges), default=0)
        self.off = -kmin * n_max if kmin < 0 else 0

    def reach_back(self, start: int, n: int, min_vertex: int = 0):
        """back[r][v] = bitmask of sums of length-r walks v -> start.

        Only vertices >= min_vertex are allowed (loop dedup convention).
        """
        V = len(self.graph.partition)
        back = [dict() for _ in range(n + 1)]
        back[0][start] = 1 << self.off
        for r in range(1, n + 1):
            prev = back[r - 1]
            cur = back[r]
            for e in self.graph.edges:
                if e.src < min_vertex or e.dst < min_vertex:
                    continue
                mask = prev.get(e.dst)
                if mask is None:
                    continue
                shifted = mask << e.disp if e.disp >= 0 else mask >> (-e.disp)
                if shifted:
                    cur[e.src] = cur.get(e.src, 0) | shifted
        return back


def closed_walk_sum_exists(graph: MarkovGraph, n: int, target: int) -> bool:
    """Is there a closed walk of length n whose displacement sum is target?"""
    dp = _SumDP(graph, n)
    for start in range(len(graph.partition)):
        back = dp.reach_back(start, n)
        mask = back[n].get(start, 0)
        if mask >> (target + dp.off) & 1:
            return True
    return False


# ---------------------------------------------------------------------------
# witness search


class _Budget:
    def __init__(self, limit: int):
        self.left = limit
        self.exhausted = False

    def spend(self, amount: int = 1) -> bool:
        self.left -= amount
        if self.left < 0:
            self.exhausted = True
            return False
        return True


def _boolean_reach_back(graph: MarkovGraph, start: int, n: int, min_vertex: int):
    V = len(graph.partition)
    back = [set() for _ in range(n + 1)]
    back[0].add(start)
    for r in range(1, n + 1):
        prev = back[r - 1]
        cur = back[r]
        for e in graph.edges:
            if e.src >= min_vertex and e.dst >= min_vertex and e.dst in prev:
                cur.add(e.src)
    return back


def _search_period_witness(F, graph: MarkovGraph, n: int, target: int | None,
                           budget: _Budget) -> LiftedOrbit | None:
    """Find a point of exact period mod 1 n (and shift target, if given).

    Exhaustive over loops of length n up to the budget; returns None if no
    witness exists (sound when the budget did not run out).
    """
    dp = _SumDP(graph, n) if target is not None else None
    use_sum = target is not None and graph.degree == 1
    for start in range(len(graph.partition)):
        if use_sum:
            back = dp.reach_back(start, n, min_vertex=start)
            if not back[n].get(start, 0) >> (target + dp.off) & 1:
                continue
        else:
            back = _boolean_reach_back(graph, start, n, min_vertex=start)
            if start not in back[n]:
                continue
        stack = [(start, 0, 0, [])]
        while stack:
            if not budget.spend():
                return None
            v, t, acc, edges = stack.pop()
            if t == n:
                if v != start or (target is not None and acc != target):
                    continue
                orb = _try_loop(F, graph, edges, n, target, budget)
                if orb is not None:
                    return orb
                continue
            rem = n - t - 1
            for e in reversed(graph.out_edges(v)):
                if e.dst < start:
                    continue
                if use_sum:
                    nacc = acc + e.disp
                    mask = back[rem].get(e.dst)
                    if mask is None or not mask >> (target - nacc + dp.off) & 1:
                        continue
                else:
                    nacc = graph.degree * acc + e.disp
                    if e.dst not in back[rem]:
                        continue
                stack.append((e.dst, t + 1, nacc, edges + [e]))
    return None


def _try_loop(F, graph, edges, n, target, budget) -> LiftedOrbit | None:
    comp = _compose_loop(graph, edges)
    if comp is None:
        return None
    S, C, d1, d2, m = comp
    if target is not None and m != target:
        return None
    I0 = graph.partition[edges[0].src]
    if S == 1 and C == 0:
        candidates = _family_candidates(I0, d1, d2, n)
    elif S != 1:
        u = C / (1 - S)
        if not d1 <= u <= d2:
            return None
        candidates = [_chart_point(I0, u)]
    else:
        return None
    for x in candidates:
        if not budget.spend(n):
            return None
        shift = verify_exact_period(F, x, n)
        if shift is None:
            continue
        if target is not None and shift != target:
            continue
        return _finish_orbit(F, mod1(x)[0], n, shift,
                             _mod_orbit_points(F, mod1(x)[0], n))
    return None


def _mod_orbit_points(F, rep: SPoint, n: int):
    pts = [rep]
    cur = rep
    for _ in range(n - 1):
        cur = F.eval(cur)
        pts.append(mod1(cur)[0])
    return pts


# ---------------------------------------------------------------------------
# period sets


def periods_mod1(F: PiecewiseAffineLifting, n_max: int = 20,
                 budget: int = DEFAULT_BUDGET,
                 graph: MarkovGraph | None = None) -> TruncatedPeriodSet:
    """Exact Per(F) within [1..n_max] (any degree)."""
    graph = graph or markov_graph(F)
    members = set()
    for orb in node_orbit_periods(F, n_max):
        members.add(orb.period)
    feasible = closed_walk_lengths(graph, n_max)
    undecided = set()
    for n in range(1, n_max + 1):
        if n in members or n not in feasible:
            continue
        bud = _Budget(budget)
        orb = _search_period_witness(F, graph, n, None, bud)
        if orb is not None:
            members.add(n)
        elif bud.exhausted:
            undecided.add(n)
    return TruncatedPeriodSet(n_max, frozenset(members), not undecided,
                              frozenset(undecided))


def periods_for_rotation(F: PiecewiseAffineLifting, p: int, q: int,
                         n_max: int = 20, budget: int = DEFAULT_BUDGET,
                         graph: MarkovGraph | None = None) -> TruncatedPeriodSet:
    """Periods in [1..n_max] of orbits with rotation number p/q (degree 1).

    Every member is a multiple of q; the period-nq candidates require shift
    np exactly.
    """
    if F.degree != 1:
        raise BadRotationData("rotation numbers need degree 1")
    g = math.gcd(p, q)
    if q <= 0:
        raise BadRotationData("q must be positive")
    if g != 1:
        p, q = p // g, q // g
    graph = graph or markov_graph(F)
    rho = Fraction(p, q)
    members = set()
    for orb in node_orbit_periods(F, n_max):
        if orb.rotation == rho:
            members.add(orb.period)
    undecided = set()
    for n in range(q, n_max + 1, q):
        if n in members:
            continue
        target = p * (n // q)
        if not closed_walk_sum_exists(graph, n, target):
            continue
        bud = _Budget(budget)
        orb = _search_period_witness(F, graph, n, target, bud)
        if orb is not None:
            members.add(n)
        elif bud.exhausted:
            undecided.add(n)
    return TruncatedPeriodSet(n_max, frozenset(members), not undecided,
                              frozenset(undecided))


def enumerate_orbits(F: PiecewiseAffineLifting, max_period: int,
                     budget: int = DEFAULT_BUDGET,
                     graph: MarkovGraph | None = None):
    """All periodic (mod 1) orbits of period <= max_period, deduplicated.

    Returns (orbits, complete).  Exhaustive loop enumeration; meant for small
    maps (property suites and orbit dumps), not for the big examples.
    """
    graph = graph or markov_graph(F)
    orbits = {}
    for orb in node_orbit_periods(F, max_period):
        orbits[orb.point_set()] = orb
    bud = _Budget(budget)
    complete = True
    for n in range(1, max_period + 1):
        for start in range(len(graph.partition)):
            back = _boolean_reach_back(graph, start, n, min_vertex=start)
            if start not in back[n]:
                continue
            stack = [(start, 0, [])]
            while stack:
                if not bud.spend():
                    return list(orbits.values()), False
                v, t, edges = stack.pop()
                if t == n:
                    if v != start:
                        continue
                    sols = _loop_candidate_points(F, graph, edges, n)
                    for x in sols:
                        orb = orbit_from_point(F, x, max_period)
                        if orb is not None and orb.point_set() not in orbits:
                            orbits[orb.point_set()] = orb
                    continue
                rem = n - t - 1
                for e in reversed(graph.out_edges(v)):
                    if e.dst < start or e.dst not in back[rem]:
                        continue
                    stack.append((e.dst, t + 1, edges + [e]))
    return list(orbits.values()), complete


def _loop_candidate_points(F, graph, edges, n):
    comp = _compose_loop(graph, edges)
    if comp is None:
        return []
    S, C, d1, d2, _ = comp
    I0 = graph.partition[edges[0].src]
    if S == 1 and C == 0:
        return list(_family_candidates(I0, d1, d2, n))
    if S != 1:
        u = C / (1 - S)
        if d1 <= u <= d2:
            return [_chart_point(I0, u)]
    return []


# ---------------------------------------------------------------------------
# classification helpers


def theorem_shape(ts: TruncatedPeriodSet) -> str:
    """Shape of the missing part of [1..n_max]: AllN / missing 1 / missing 2."""
    if ts.n_max < 3:
        raise ValueError("theorem_shape needs n_max >= 3")
    missing = set(range(1, ts.n_max + 1)) - set(ts.members)
    if not missing:
        return "AllN"
    if missing == {1}:
        return "MissingOnlyOne"
    if missing == {2}:
        return "MissingOnlyTwo"
    return "Other"


def true_orbit_points(F, orbit: LiftedOrbit) -> list[SPoint]:
    if orbit.shift != 0:
        raise NotTrueOrbit(f"orbit has shift {orbit.shift}")
    pts = [orbit.representative]
    cur = orbit.representative
    for _ in range(orbit.period - 1):
        cur = F.eval(cur)
        pts.append(cur)
    return pts


def orbit_type_3star(F, orbit: LiftedOrbit, center: SPoint | None = None) -> set[int]:
    """Types of a true orbit whose hull is a 3-star (arm-map periods).

    If the branching point lies on the orbit the type is {1}.  An explicit
    center may be supplied for degenerate occupancies; otherwise the hull
    must have exactly one valence-3 point.
    """
    pts = true_orbit_points(F, orbit)
    if center is None:
        branch_bases = {p.base for p in pts if p.height > 0}
        if len(branch_bases) != 1:
            raise NotAStarOrbit("orbit occupies zero or several branches")
        m = next(iter(branch_bases))
        res = [p.re for p in pts]
        if not (min(res) < m < max(res)):
            raise NotAStarOrbit("hull does not branch at the base")
        center = R(m)
    if center in pts:
        return {1}
    m = center.base

    def arm(p: SPoint) -> str:
        if p.height > 0 and p.base == m:
            return "up"
        if p.re < m:
            return "left"
        if p.re > m:
            return "right"
        raise NotAStarOrbit(f"{p} coincides with the center")

    occupied = {}
    for p in pts:
        a = arm(p)
        d = p.height if a == "up" else abs(p.re - m)
        if a not in occupied or d < occupied[a][0]:
            occupied[a] = (d, p)
    nxt = {}
    for a, (_, sm) in occupied.items():
        img = F.eval(sm)
        nxt[a] = arm(img)
    # cycle lengths of the arm map
    types = set()
    for a in occupied:
        seen = []
        cur = a
        while cur not in seen:
            seen.append(cur)
            cur = nxt[cur]
        types.add(len(seen) - seen.index(cur))
    return types


# ---------------------------------------------------------------------------
# block structure


@dataclass(frozen=True)
class Blocks:
    """The q blocks P_i(x) of a rotation-p/q lifted orbit (true G-orbits)."""

    x: SPoint
    p: int
    q: int
    n: int
    parts: tuple[tuple[SPoint, ...], ...]


def blocks(F: PiecewiseAffineLifting, orbit: LiftedOrbit, x: SPoint | None = None) -> Blocks:
    rho = orbit.rotation
    q = rho.denominator
    p = rho.numerator
    if orbit.period % q != 0:
        raise BadRotationData("period is not a multiple of the rotation denominator")
    n = orbit.period // q
    x = x if x is not None else orbit.representative
    G = power_shift(F, q, p)
    parts = []
    for i in range(q):
        base = F.iterate(x, i)
        pts = [base]
        cur = base
        for _ in range(n - 1):
            cur = G.eval(cur)
            pts.append(cur)
        if G.eval(cur) != base:
            raise BadRotationData(f"block P_{i} is not a true G-orbit of period {n}")
        for s in range(1, n):
            if pts[s] == base:
                raise BadRotationData(f"block P_{i} has period smaller than {n}")
        parts.append(tuple(pts))
    return Blocks(x=x, p=p, q=q, n=n, parts=tuple(parts))


def has_increasing_block_structure(blk: Blocks) -> bool:
    """max Re(P_i) < min Re(P_{i+1}) for all i, wrapping to P_0 + p."""
    if blk.q == 1:
        return True
    for i in range(blk.q):
        cur_max = max(p.re for p in blk.parts[i])
        if i + 1 < blk.q:
            nxt_min = min(p.re for p in blk.parts[i + 1])
        else:
            nxt_min = min(p.re for p in blk.parts[0]) + blk.p
        if not cur_max < nxt_min:
            return False
    return True


def reindex_shift(blk: Blocks) -> int:
    """Smallest integer l making the blocks of F + l increasing.

    l exceeds max_i(max Re P_i - min Re P_{i+1}) per the separation lemma;
    for q = 1 the structure is vacuous and 0 is admissible.
    """
    if blk.q == 1:
        return 0
    worst = None
    for i in range(blk.q):
        cur_max = max(p.re for p in blk.parts[i])
        if i + 1 < blk.q:
            nxt_min = min(p.re for p in blk.parts[i + 1])
        else:
            nxt_min = min(p.re for p in blk.parts[0]) + blk.p
        gap = cur_max - nxt_min
        if worst is None or gap > worst:
            worst = gap
    return math.floor(worst) + 1
