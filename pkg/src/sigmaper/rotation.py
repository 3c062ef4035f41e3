"""Rotation intervals of degree-1 Markov liftings via extremal cycle means.

The rotation interval is [min cycle mean, max cycle mean] of the
displacement-weighted Markov graph, computed per strongly connected
component with Karp's dynamic program in exact rational arithmetic.  Each
bound comes with a witness cycle whose mean is re-verified exactly.  For
liftings with F(R) = S this equals Rot_R(F) = Rot(F); otherwise callers
should present it as the Markov rotation interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NoCycle, NotALoop
from .markov import MarkovGraph, MGEdge


@dataclass(frozen=True)
class RotationInterval:
    lo: Fraction
    hi: Fraction
    lo_witness: tuple[MGEdge, ...]
    hi_witness: tuple[MGEdge, ...]

    def __contains__(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def report(self, graph: MarkovGraph) -> str:
        names = [I.name for I in graph.partition]
        lo_cycle = "->".join(names[e.src] for e in self.lo_witness)
        hi_cycle = "->".join(names[e.src] for e in self.hi_witness)
        return (
            f"rot = [{self.lo}, {self.hi}]\n"
            f"min witness: {lo_cycle} (mean {self.lo})\n"
            f"max witness: {hi_cycle} (mean {self.hi})\n"
        )


def loop_rotation(loop) -> Fraction:
    """Mean displacement of a closed edge sequence."""
    edges = list(loop)
    if not edges:
        raise NotALoop("empty loop")
    for e1, e2 in zip(edges, edges[1:]):
        if e1.dst != e2.src:
            raise NotALoop("edges do not chain")
    if edges[-1].dst != edges[0].src:
        raise NotALoop("sequence does not close")
    return Fraction(sum(e.disp for e in edges), len(edges))


def _sccs(n: int, adj: dict[int, list[int]]) -> list[list[int]]:
    """Tarjan strongly connected components, iterative."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = [0]
    for root in range(n):
        if root in index:
            continue
        work = [(root, iter(adj.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def _karp_min_mean(vertices: list[int], edges: list[MGEdge]) -> Fraction | None:
    """Minimum cycle mean inside one SCC; None if the SCC has no edge."""
    if not edges:
        return None
    vs = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    INF = None
    D = [[INF] * n for _ in range(n + 1)]
    D[0][0] = Fraction(0)  # source = vertices[0]
    for k in range(1, n + 1):
        row, prev = D[k], D[k - 1]
        for e in edges:
            u, v = vs[e.src], vs[e.dst]
            if prev[u] is None:
                continue
            cand = prev[u] + e.disp
            if row[v] is None or cand < row[v]:
                row[v] = cand
    best = None
    for v in range(n):
        if D[n][v] is None:
            continue
        worst = None
        for k in range(n):
            if D[k][v] is None:
                continue
            val = Fraction(D[n][v] - D[k][v], n - k)
            if worst is None or val > worst:
                worst = val
        if worst is not None and (best is None or worst < best):
            best = worst
    return best


def _tight_cycle(vertices, edges, lam: Fraction) -> list[MGEdge]:
    """A cycle of mean exactly lam in a component whose min mean is lam.

    Reweight by w' = w - lam (no negative cycles), compute Bellman-Ford
    potentials, then DFS the tight subgraph (reduced weight 0) for a cycle.
    Deterministic: vertices and edges are scanned in sorted order.
    """
    phi = {v: Fraction(0) for v in vertices}
    for _ in range(len(vertices)):
        changed = False
        for e in edges:
            cand = phi[e.src] + e.disp - lam
            if cand < phi[e.dst]:
                phi[e.dst] = cand
                changed = True
        if not changed:
            break
    tight: dict[int, list[MGEdge]] = {}
    for e in edges:
        if phi[e.src] + e.disp - lam == phi[e.dst]:
            tight.setdefault(e.src, []).append(e)
    # any cycle of tight edges has mean exactly lam (potentials telescope),
    # and the minimizing cycle is tight, so a DFS back edge must exist
    color = {v: 0 for v in vertices}  # 0 white, 1 on stack, 2 done
    for start in vertices:
        if color[start] != 0:
            continue
        stack = [(start, iter(tight.get(start, ())))]
        color[start] = 1
        path: list[MGEdge] = []
        while stack:
            v, it = stack[-1]
            for e in it:
                if color[e.dst] == 1:
                    cycle = []
                    if e.dst != v:
                        for pe in reversed(path):
                            cycle.append(pe)
                            if pe.src == e.dst:
                                break
                        cycle.reverse()
                    cycle.append(e)
                    return cycle
                if color[e.dst] == 0:
                    color[e.dst] = 1
                    path.append(e)
                    stack.append((e.dst, iter(tight.get(e.dst, ()))))
                    break
            else:
                color[v] = 2
                stack.pop()
                if path:
                    path.pop()
    raise AssertionError("tight cycle extraction failed")


def _negate_edges(edges):
    return [
        MGEdge(e.src, e.dst, -e.disp, e.sign, e.u1, e.u2, e.slope, e.icept)
        for e in edges
    ]


def rotation_interval(graph: MarkovGraph) -> RotationInterval:
    """[min cycle mean, max cycle mean] with exact witness cycles."""
    adj: dict[int, list[int]] = {}
    for e in graph.edges:
        adj.setdefault(e.src, []).append(e.dst)
    comps = _sccs(len(graph.partition), adj)
    lo = hi = None
    lo_comp = hi_comp = None
    for comp in comps:
        cset = set(comp)
        comp_edges = [e for e in graph.edges if e.src in cset and e.dst in cset]
        mn = _karp_min_mean(comp, comp_edges)
        if mn is None:
            continue
        neg = _karp_min_mean(comp, _negate_edges(comp_edges))
        mx = -neg
        if lo is None or mn < lo:
            lo, lo_comp = mn, (comp, comp_edges)
        if hi is None or mx > hi:
            hi, hi_comp = mx, (comp, comp_edges)
    if lo is None:
        raise NoCycle("the Markov graph is acyclic")
    lo_wit = _tight_cycle(*lo_comp, lo)
    hi_neg = _tight_cycle(hi_comp[0], _negate_edges(hi_comp[1]), -hi)
    hi_wit = [graph.find_edge(e.src, e.dst, -e.disp) for e in hi_neg]
    assert loop_rotation(lo_wit) == lo and loop_rotation(hi_wit) == hi
    return RotationInterval(lo, hi, tuple(lo_wit), tuple(hi_wit))
