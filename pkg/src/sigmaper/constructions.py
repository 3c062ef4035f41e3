"""Parametric builders for the worked example maps and generic embeddings.

Each builder returns a validated Markov lifting; free parameters default to
equally spaced rationals.  The two-glued-stars map carries a fixed 16-point
true orbit whose exact coordinates are an implementation choice validated by
the computed rotation interval and period sets (the combinatorics are what
matters: a degree-1 map with G(0) = -5 cycling the orbit through branches
B_{-4}..B_6 in two sweeps).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BadPartition, NotMarkov, UnrepresentableTail
from .orderings import ShValue
from .sigmamap import PiecewiseAffineLifting, build_lifting
from .space import B, R, SPoint, ZERO, ONE, mod1

Rat = Fraction


def _check_strict(seq, what):
    for a, b in zip(seq, seq[1:]):
        if not a < b:
            raise BadPartition(f"{what} must be strictly increasing: {a} !< {b}")


def example_5_1(n: int, a=None) -> PiecewiseAffineLifting:
    """Circle-with-branch map: large period-n orbit, Per = N \\ {1}.

    Nodes 0 = a_0 < a_1 < ... < a_n = 1 (default i/n); a_i -> a_{i-1} for
    i >= 3, a_2 -> max B_0, a_1 -> 0, max B_0 -> a_2 + 1, degree 1.
    """
    if n < 3:
        raise BadPartition("need n >= 3")
    a = [Rat(x) for x in a] if a is not None else [Rat(i, n) for i in range(n + 1)]
    if len(a) != n + 1 or a[0] != 0 or a[-1] != 1:
        raise BadPartition("need 0 = a_0 < ... < a_n = 1")
    _check_strict(a, "a_i")
    pairs = []
    pairs.append((R(a[0]), R(a[n - 1] - 1)))          # F(1) = a_{n-1}
    pairs.append((R(a[1]), R(ZERO)))
    pairs.append((R(a[2]), B(0, 1)))
    for i in range(3, n):
        pairs.append((R(a[i]), R(a[i - 1])))
    pairs.append((B(0, 1), R(a[2] + 1)))
    names = {("real", i): f"A_{i + 1}" for i in range(n)}
    names[("branch", 0)] = "B_0"
    return build_lifting(1, pairs, names)


def example_5_2(t=None, z=None) -> PiecewiseAffineLifting:
    """Map with 0 interior to the rotation interval and Per = N \\ {2}.

    Nodes 0 < t_2 < t_1 < t_0 < z_0 < z_1 < 1 (default sixths); t_0 -> t_1,
    t_1 -> t_2, t_2 -> t_0 - 1, z_0 -> z_1, z_1 -> max B_1, max B_0 -> z_0,
    0 -> 0, degree 1.
    """
    t2, t1, t0 = [Rat(x) for x in t] if t is not None else (Rat(1, 6), Rat(2, 6), Rat(3, 6))
    z0, z1 = [Rat(x) for x in z] if z is not None else (Rat(4, 6), Rat(5, 6))
    _check_strict([ZERO, t2, t1, t0, z0, z1, ONE], "0 < t_2 < t_1 < t_0 < z_0 < z_1 < 1")
    pairs = [
        (R(ZERO), R(ZERO)),
        (R(t2), R(t0 - 1)),
        (R(t1), R(t2)),
        (R(t0), R(t1)),
        (R(z0), R(z1)),
        (R(z1), B(1, 1)),
        (B(0, 1), R(z0)),
    ]
    names = {
        ("real", 0): "I_2", ("real", 1): "I_1", ("real", 2): "I_0",
        ("real", 3): "C", ("real", 4): "J_0", ("real", 5): "J_1",
        ("branch", 0): "B_0",
    }
    return build_lifting(1, pairs, names)


def example_6_1(n: int, a=Rat(-1, 2)) -> PiecewiseAffineLifting:
    """Map with 0 interior to Rot and Per(0,F) = {k >= n}.

    F(0) = -1, F(max B_0) = max B_1, F(a) = max B_0 - (n-1) for a in (-1,0),
    affine on B_0, [-1,a], [a,0], degree 1.  (The rotation interval
    [-(n-2), 1] and Per(0,F) = {k >= n} pin the image of a to
    max B_{-(n-1)}; see the decisions ledger.)
    """
    if n < 3:
        raise BadPartition("need n >= 3")
    a = Rat(a)
    if not (-1 < a < 0):
        raise BadPartition("need a in (-1, 0)")
    pairs = [
        (R(ZERO), R(-1)),
        (R(a + 1), B(2 - n, 1)),   # F(a) + 1 = max B_0 - (n-1) + 1
        (B(0, 1), B(1, 1)),
    ]
    names = {("real", 0): "A_1", ("real", 1): "A_2", ("branch", 0): "B_0"}
    return build_lifting(1, pairs, names)


def example_6_3(k: int, heights=None, a=Rat(1, 2)) -> PiecewiseAffineLifting:
    """k-star model: true orbit of period k+1, Rot = [-k+2, 0].

    Orbit x_i = B(i, b_i) for 0 <= i <= k-1 (1 = b_0 > ... > b_{k-1} > 0,
    default b_i = 1 - i/k) and x_k = a + k - 2 in R; F(x_i) = x_{i+1},
    F(x_k) = x_0, F(1) = 0, degree 1.
    """
    if k < 3:
        raise BadPartition("need k >= 3")
    b = [Rat(x) for x in heights] if heights is not None else [1 - Rat(i, k) for i in range(k)]
    if len(b) != k or b[0] != 1:
        raise BadPartition("need 1 = b_0 > b_1 > ... > b_{k-1} > 0")
    _check_strict(list(reversed(b)), "reversed b_i")
    if b[-1] <= 0:
        raise BadPartition("heights must stay positive")
    a = Rat(a)
    if not (0 < a < 1):
        raise BadPartition("need a in (0, 1)")
    pairs = [(R(ZERO), R(-1))]
    pairs.append((R(a), B(2 - k, 1)))              # x_k - (k-2) -> x_0 - (k-2)
    for i in range(k - 1):
        pairs.append((B(0, b[i]), B(1, b[i + 1])))  # x_i - i -> x_{i+1} - i
    pairs.append((B(0, b[k - 1]), R(a - 1)))        # x_{k-1} -> x_k
    return build_lifting(1, pairs)


# exact coordinates of the 16-point orbit of the two-glued-stars map;
# heights in 64ths, chosen to keep the covering graph tame (see module
# docstring); branch bases sweep -4..6 then 2..5
_GLUED_ORBIT = [
    R(Rat(1, 2)),
    B(-4, 1),
    B(-3, Rat(60, 64)),
    B(-2, Rat(56, 64)),
    B(-1, Rat(52, 64)),
    B(0, Rat(48, 64)),
    B(1, Rat(36, 64)),
    B(2, Rat(20, 64)),
    B(3, Rat(32, 64)),
    B(4, Rat(24, 64)),
    B(5, Rat(28, 64)),
    B(6, Rat(16, 64)),
    B(2, Rat(12, 64)),
    B(3, Rat(8, 64)),
    B(4, Rat(6, 64)),
    B(5, Rat(4, 64)),
]


def example_6_4() -> PiecewiseAffineLifting:
    """Two-glued-stars model: period-16 true orbit, Rot = [-5, 1],
    Per(0,G) = {n >= 6}; G(0) = -5."""
    orbit = _GLUED_ORBIT
    pairs = [(R(ZERO), R(-5))]
    for i, x in enumerate(orbit):
        nxt = orbit[(i + 1) % 16]
        node, k = mod1(x)
        pairs.append((node, nxt.translate(-k)))
    return build_lifting(1, pairs)


def glued_orbit_points() -> list[SPoint]:
    """The 16 exact orbit points of example_6_4, in orbit order."""
    return list(_GLUED_ORBIT)


def circle_collapse(circle_nodes) -> PiecewiseAffineLifting:
    """Extend a Markov degree-1 circle lifting to S by collapsing branches.

    circle_nodes: (x, image) pairs with x in [0,1) real, images real and on
    the node grid mod 1; 0 must be a node.  Every branch B_m collapses to the
    image of its base, so Per(F) = Per(circle map) and no periodic point
    enters an open branch.
    """
    pts = {}
    for x, img in circle_nodes:
        x = Rat(x)
        img = Rat(img)
        if not 0 <= x < 1:
            raise BadPartition(f"circle node {x} outside [0,1)")
        pts[x] = img
    if ZERO not in pts:
        raise BadPartition("0 must be a circle node")
    grid = set(pts)
    for x, img in pts.items():
        if (img - (img.numerator // img.denominator)) not in grid:
            raise NotMarkov(f"circle image {img} of {x} off the node grid")
    pairs = [(R(x), R(img)) for x, img in pts.items()]
    pairs.append((B(0, 1), R(pts[ZERO])))
    return build_lifting(1, pairs)


def embed_star_map(star_nodes) -> PiecewiseAffineLifting:
    """Embed a Markov self-map of the 3-star Y_0 = [-1/3,1/3] u B_0 into L_1.

    star_nodes: (node, image) pairs of SPoints inside Y_0; must include the
    three endpoints R(-1/3), R(1/3), B(0,1), and the center R(0).  The output
    fixes 1/2, interpolates on the collars [1/3,1/2] and [1/2,2/3], and has
    Rot(F) = {0} and Per(F) = TPer(star map).
    """
    third = Rat(1, 3)

    def in_y0(p: SPoint) -> bool:
        if p.height > 0:
            return p.base == 0
        return -third <= p.base <= third

    imgs = {}
    for node, img in star_nodes:
        if not in_y0(node) or not in_y0(img):
            raise BadPartition(f"{node} -> {img} leaves the 3-star Y_0")
        imgs[node] = img
    for req in (R(-third), R(third), R(ZERO), B(0, 1)):
        if req not in imgs:
            raise BadPartition(f"star map must define the image of {req}")
    grid = set(imgs)
    for node, img in imgs.items():
        if img not in grid:
            raise NotMarkov(f"star image {img} of node {node} off the node grid")
    pairs = []
    for node, img in imgs.items():
        if node.is_real and node.base < 0:
            pairs.append((R(node.base + 1), img.translate(1)))
        else:
            pairs.append((node, img))
    pairs.append((R(Rat(1, 2)), R(Rat(1, 2))))
    return build_lifting(1, pairs)


# ---------------------------------------------------------------------------
# Stefan cycles and the branch family


def _stefan_permutation(s: int) -> list[int]:
    """0-based successor table of the minimal pattern with TPer = Shs(s)."""
    if s == 1:
        return [0]
    if s % 2 == 1:
        # spiral around the middle point: m -> m+1 -> m-1 -> m+2 -> ...
        m = s // 2
        order = [m]
        for step in range(1, s):
            half = (step + 1) // 2
            order.append(m + half if step % 2 == 1 else m - half)
        succ = [0] * s
        for i in range(s):
            succ[order[i]] = order[(i + 1) % s]
        return succ
    # even: double the pattern for s/2
    inner = _stefan_permutation(s // 2)
    n = s // 2
    succ = [0] * s
    for i in range(n):
        succ[i] = inner[i] + n   # lower half -> upper half via the pattern
        succ[i + n] = i          # upper half -> lower half, order preserved
    return succ


def stefan_interval_map(s) -> list[tuple[Fraction, Fraction]]:
    """Connect-the-dots interval map on [0,1] with TPer = Shs(s).

    Returns (point, image) pairs of the cycle placed at j/(s-1); s = 2^inf is
    rejected (no finite Markov map realizes that tail).
    """
    s = ShValue.of(s)
    if s.is_two_inf:
        raise UnrepresentableTail("2^inf has no finite Markov realization")
    n = s.n
    if n == 1:
        return [(ZERO, ZERO)]
    succ = _stefan_permutation(n)
    return [(Rat(i, n - 1), Rat(succ[i], n - 1)) for i in range(n)]


def branch_family(d: int, s) -> PiecewiseAffineLifting:
    """Degree-d lifting whose branch dynamics is the Stefan-s interval map.

    The interval map acts on heights of B_0 (so the cycle lives in the
    branches); [0,1] maps affinely onto the arc from F(0) to F(0) + d.
    """
    dots = stefan_interval_map(s)
    pairs = []
    base_img = None
    for x, y in dots:
        if x == 0:
            base_img = B(0, y)
            pairs.append((R(ZERO), base_img))
        else:
            pairs.append((B(0, x), B(0, y)))
    if all(x != 1 for x, _ in dots):
        # single fixed point pattern: park it at the branch top
        pairs = [(R(ZERO), B(0, 1)), (B(0, 1), B(0, 1))]
        base_img = B(0, 1)
    return build_lifting(int(d), pairs)
