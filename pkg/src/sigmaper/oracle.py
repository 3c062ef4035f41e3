"""Brute-force period oracle: pullback refinement of F^n, no Markov graph.

The fundamental domain is cut at the breakpoints of F^n, obtained by pulling
back the node grid through the pieces of F^(n-1); on each resulting piece
F^n is affine into a single basic-interval translate, so F^n(x) = x + k is a
one-variable linear equation solved exactly.  Minimality of every solution is
decided by exact orbit computation.  This is deliberately independent of the
covering-graph machinery and is used to cross-check periods_mod1.
"""

from __future__ import annotations

from fractions import Fraction

from .markov import basic_intervals
from .periods import TruncatedPeriodSet, verify_exact_period
from .sigmamap import PiecewiseAffineLifting
from .space import B, R, SInterval, SPoint, ZERO, hull

Rat = Fraction


class OracleOverflow(RuntimeError):
    """Piece count exceeded the safety cap (result would be incomplete)."""


def _chart(p: SPoint) -> Fraction:
    return p.height if p.height > 0 else p.re


def _grid_cuts(F: PiecewiseAffineLifting, H: SInterval):
    """Grid points (nodes + Z) strictly inside the arc H, as (t, point)."""
    L = H.length
    run = None
    stubs = []
    for seg in H.segments():
        if seg[0] == "real":
            _, x1, x2 = seg
            run = (min(x1, x2), max(x1, x2))
        else:
            _, m, h1, h2 = seg
            stubs.append((int(m), min(h1, h2), max(h1, h2)))
    cuts = []

    def push(pt):
        t = H.position_of(pt)
        if 0 < t < L:
            cuts.append((t, pt))

    if run is not None:
        lo, hi = run
        for x in F.real_nodes:
            k = (lo - x).__ceil__()
            while x + k <= hi:
                push(R(x + k))
                k += 1
    for m, bot, top in stubs:
        for h in F.branch_nodes:
            if bot <= h <= top:
                push(B(m, h))
        if bot > 0:
            continue
        # the stub base R(m) is a translate of the node R(0)
        push(R(m))
    cuts.sort(key=lambda c: c[0])
    dedup = []
    for t, pt in cuts:
        if not dedup or dedup[-1][0] != t:
            dedup.append((t, pt))
    return dedup


def _subdivide(F: PiecewiseAffineLifting, piece):
    """Split one piece of F^n at the pullback of the grid, then apply F."""
    kind, u1, u2, A, Bpt = piece
    H = hull(A, Bpt)
    L = H.length
    out = []
    if L == 0:
        # constant piece: image is a single point forever
        img = F.eval(A)
        out.append((kind, u1, u2, img, img))
        return out
    cuts = _grid_cuts(F, H)
    us = [u1] + [u1 + (u2 - u1) * t / L for t, _ in cuts] + [u2]
    pts = [A] + [pt for _, pt in cuts] + [Bpt]
    imgs = [F.eval(p) for p in pts]
    for i in range(len(us) - 1):
        out.append((kind, us[i], us[i + 1], imgs[i], imgs[i + 1]))
    return out


def _initial_pieces(F: PiecewiseAffineLifting):
    pieces = []
    for I in basic_intervals(F.nodes):
        pieces.append((I.kind, I.lo, I.hi, F.eval(I.a), F.eval(I.b)))
    return pieces


def _integer_translate(p: SPoint, q: SPoint) -> bool:
    return p.height == q.height and (p.base - q.base).denominator == 1


def _piece_solutions(piece, n: int):
    """Candidate periodic points of F^n on one refined piece.

    Endpoints are pre-filtered through the known endpoint images, interior
    points come from solving the affine equation; mixed-chart pieces (domain
    real, image in a branch, or vice versa) carry interior periodic points
    only at integer domain points, which are piece endpoints after refinement.
    """
    kind, u1, u2, A, Bpt = piece
    cands = []

    def dom_point(u):
        if kind == "real":
            return R(u)
        return B(0, u) if u > 0 else R(ZERO)

    if _integer_translate(A, dom_point(u1)):
        cands.append(dom_point(u1))
    if _integer_translate(Bpt, dom_point(u2)):
        cands.append(dom_point(u2))
    if u1 == u2:
        return cands
    if kind == "real" and A.is_real and Bpt.is_real:
        a_val, b_val = A.re, Bpt.re
        slope = (b_val - a_val) / (u2 - u1)
        g1, g2 = a_val - u1, b_val - u2
        lo, hi = min(g1, g2), max(g1, g2)
        k = lo.__ceil__()
        while k <= hi:
            if slope != 1:
                u = (a_val - slope * u1 - k) / (1 - slope)
                if u1 <= u <= u2:
                    cands.append(dom_point(u))
            elif g1 == k:
                cands.extend(_family_samples(dom_point, u1, u2, n))
                break
            k += 1
    elif kind == "branch" and A.height > 0 and Bpt.height > 0 and A.base == Bpt.base:
        a_val, b_val = A.height, Bpt.height
        slope = (b_val - a_val) / (u2 - u1)
        if slope != 1:
            u = (a_val - slope * u1) / (1 - slope)
            if u1 < u <= u2 and u > 0:
                cands.append(dom_point(u))
        elif a_val == u1:
            cands.extend(_family_samples(dom_point, u1, u2, n))
    return cands


def _family_samples(dom_point, u1, u2, n):
    span = u2 - u1
    k = 3 * n + 2
    return [dom_point(u1 + span * Fraction(j, k + 1)) for j in range(1, k + 1)]


def pullback_periods(F: PiecewiseAffineLifting, n_max: int = 12,
                     max_pieces: int = 2_000_000) -> TruncatedPeriodSet:
    """Per(F) on [1..n_max] by pure pullback refinement (the oracle)."""
    members = set()
    pieces = _initial_pieces(F)
    total = len(pieces)
    for n in range(1, n_max + 1):
        if n > 1:
            refined = []
            for piece in pieces:
                refined.extend(_subdivide(F, piece))
            pieces = refined
            total += len(pieces)
            if total > max_pieces:
                raise OracleOverflow(f"{total} pieces at n={n}")
        seen = set()
        for piece in pieces:
            for x in _piece_solutions(piece, n):
                if x in seen:
                    continue
                seen.add(x)
                if verify_exact_period(F, x, n) is not None:
                    members.add(n)
                    # keep scanning other n via later pieces, but this n is done
                    break
            if n in members:
                break
    return TruncatedPeriodSet(n_max, frozenset(members))
