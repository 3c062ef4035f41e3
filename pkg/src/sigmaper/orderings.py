"""Sharkovsky and Baldwin order combinatorics and the M / Lambda sets.

The Sharkovsky ordering on N u {2^inf} and Baldwin's partial orderings <=_t
on N_t = (N u {t 2^inf}) \\ {2..t-1} drive every period-forcing statement in
this package.  2^inf and t 2^inf are explicit symbolic values, never
approximated.  In Baldwin case (iv) the decomposition k = i*m + j*t uses
i, j >= 1 by default; pass allow_zero=True to experiment with i, j >= 0.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInDomain

Rat = Fraction


@dataclass(frozen=True)
class ShValue:
    """A natural number n >= 1 or the symbol 2^inf (n is None)."""

    n: int | None

    @property
    def is_two_inf(self) -> bool:
        return self.n is None

    @staticmethod
    def of(v) -> "ShValue":
        if isinstance(v, ShValue):
            return v
        if v is None or v == "2^inf":
            return TWO_INF
        v = int(v)
        if v < 1:
            raise ValueError("ShValue needs n >= 1")
        return ShValue(v)

    def __repr__(self):
        return "2^inf" if self.is_two_inf else str(self.n)


TWO_INF = ShValue(None)


def _split2(n: int) -> tuple[int, int]:
    """n = 2^e * o with o odd."""
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    return e, n


def _sh_rank(v: ShValue):
    """Totally ordered key, larger key = higher in the Sharkovsky ordering.

    Odd-times-2^e block elements rank above 2^inf, which ranks above the
    pure powers of two; within an odd block smaller odd part is higher,
    blocks with smaller e are higher; powers of two rank by exponent.
    """
    if v.is_two_inf:
        return (1, 0, 0)
    e, o = _split2(v.n)
    if o > 1:
        return (2, -e, -o)
    return (0, e, 0)


def sh_le(a, b) -> bool:
    """a <=_Sh b (a below or equal to b in the Sharkovsky ordering)."""
    return _sh_rank(ShValue.of(a)) <= _sh_rank(ShValue.of(b))


def sh_tail(s, n_max: int) -> set[int]:
    """Shs(s): the initial segment {k <= n_max : k <=_Sh s}."""
    s = ShValue.of(s)
    return {k for k in range(1, n_max + 1) if sh_le(k, s)}


@dataclass(frozen=True)
class BaldwinValue:
    """Element of N_t: a natural number or the symbol t*2^inf (n is None)."""

    n: int | None

    @staticmethod
    def of(v) -> "BaldwinValue":
        if isinstance(v, BaldwinValue):
            return v
        if v is None or (isinstance(v, str) and v.endswith("2^inf")):
            return T_TWO_INF
        return BaldwinValue(int(v))

    def __repr__(self):
        return "t*2^inf" if self.n is None else str(self.n)


T_TWO_INF = BaldwinValue(None)


def _check_domain(t: int, v: BaldwinValue):
    if t < 2:
        raise NotInDomain("Baldwin orderings need t >= 2")
    if v.n is not None and 2 <= v.n <= t - 1:
        raise NotInDomain(f"{v.n} is outside N_{t}")


def _in_ntl(t: int, v: BaldwinValue) -> bool:
    """v in N_t^L = {mt : m in N} u {1, t*2^inf}."""
    if v.n is None:
        return True
    return v.n == 1 or v.n % t == 0


def _over_t(v: BaldwinValue, t: int) -> ShValue:
    """v / t with the rule (t*2^inf)/t = 2^inf; only for NTL elements."""
    if v.n is None:
        return TWO_INF
    return ShValue(v.n // t)


def baldwin_le(t: int, k, m, allow_zero: bool = False) -> bool:
    """k <=_t m in the Baldwin partial ordering on N_t."""
    k = BaldwinValue.of(k)
    m = BaldwinValue.of(m)
    _check_domain(t, k)
    _check_domain(t, m)
    if k.n == 1 or k == m:
        return True
    k_l, m_l = _in_ntl(t, k), _in_ntl(t, m)
    if k_l and m_l and k.n != 1 and m.n != 1:
        return sh_le(_over_t(k, t), _over_t(m, t))
    if k_l and not m_l:
        return True
    if not k_l and not m_l and k.n is not None and m.n is not None:
        lo = 0 if allow_zero else 1
        i = lo
        while i * m.n + lo * t <= k.n:
            rem = k.n - i * m.n
            if rem >= lo * t and rem % t == 0 and (rem // t >= lo):
                return True
            i += 1
        return False
    return False


def baldwin_tail(t: int, m, n_max: int, allow_zero: bool = False) -> set[int]:
    """Downward closure of m under <=_t, intersected with [1..n_max]."""
    m = BaldwinValue.of(m)
    _check_domain(t, m)
    out = set()
    for k in range(1, n_max + 1):
        if 2 <= k <= t - 1:
            continue
        if baldwin_le(t, k, m, allow_zero):
            out.add(k)
    return out


def is_tail(t: int, A, n_max: int, allow_zero: bool = False) -> bool:
    """Is A (within the window) downward closed for <=_t?"""
    A = set(A)
    if not A:
        return False
    for m in A:
        if 2 <= m <= t - 1:
            return False
        if not baldwin_tail(t, m, n_max, allow_zero) <= A:
            return False
    return True


def is_union_of_tails(A, t_max: int, n_max: int, allow_zero: bool = False) -> bool:
    """Consistent with a finite union of tails of <=_t, t in [2..t_max],
    on the window [1..n_max] (a statement about the truncation only)."""
    A = set(A)
    if not A or 1 not in A:
        return False
    for a in A:
        ok = False
        for t in range(2, t_max + 1):
            if 2 <= a <= t - 1:
                continue
            if baldwin_tail(t, a, n_max, allow_zero) <= A:
                ok = True
                break
        if not ok:
            return False
    return True


def m_interval(c, d, n_max: int) -> set[int]:
    """M(c,d) = {n : c < k/n < d for some integer k}, within [1..n_max]."""
    c, d = Rat(c), Rat(d)
    if c > d:
        raise ValueError("need c <= d")
    out = set()
    for n in range(1, n_max + 1):
        lo = c * n
        k0 = lo.numerator // lo.denominator + 1  # smallest integer > lo
        if k0 < d * n:
            out.add(n)
    return out


def lambda_set(rho, A, n_max: int) -> set[int]:
    """Lambda(rho, A) = {n*q : q in A} for rho = k/n in lowest terms;
    empty for the irrational marker rho=None."""
    if rho is None:
        return set()
    rho = Rat(rho)
    n = rho.denominator
    return {n * q for q in A if 1 <= n * q <= n_max}


# ---------------------------------------------------------------------------
# period-set expressions


@dataclass(frozen=True)
class PeriodSetExpr:
    """Union of symbolic terms, evaluable on any window [1..n_max].

    Terms: ('finite', frozenset), ('cofinite', n0), ('lambda', rho, ShValue),
    ('m', c, d), ('scaled_tail', q, t, BaldwinValue).
    """

    terms: tuple

    def evaluate(self, n_max: int) -> set[int]:
        out: set[int] = set()
        for term in self.terms:
            kind = term[0]
            if kind == "finite":
                out |= {n for n in term[1] if 1 <= n <= n_max}
            elif kind == "cofinite":
                out |= set(range(max(1, term[1]), n_max + 1))
            elif kind == "lambda":
                _, rho, s = term
                if rho is not None:
                    out |= lambda_set(rho, sh_tail(s, n_max), n_max)
            elif kind == "m":
                out |= m_interval(term[1], term[2], n_max)
            elif kind == "scaled_tail":
                _, q, t, top = term
                out |= {q * k for k in baldwin_tail(t, top, n_max) if q * k <= n_max}
            else:
                raise ValueError(f"unknown term {kind!r}")
        return out

    def __or__(self, other: "PeriodSetExpr") -> "PeriodSetExpr":
        return PeriodSetExpr(self.terms + other.terms)


def misiurewicz_expr(c, d, s_c, s_d) -> PeriodSetExpr:
    """Lambda(c, Shs(s_c)) u M(c,d) u Lambda(d, Shs(s_d)); irrational
    endpoints (None) drop their Lambda term."""
    c = None if c is None else Rat(c)
    d = None if d is None else Rat(d)
    if c is not None and d is not None and c > d:
        raise ValueError("need c <= d")
    terms = [
        ("lambda", c, ShValue.of(s_c)),
        ("m", c if c is not None else d, d if d is not None else c),
        ("lambda", d, ShValue.of(s_d)),
    ]
    return PeriodSetExpr(tuple(terms))


_TOKEN = _re.compile(r"\s*(?:(?P<frac>-?\d+(?:/\d+)?)|(?P<sym>2\^(?:inf|oo))|(?P<p>[A-Za-z(){},;+]))")


def parse_period_expr(text: str) -> PeriodSetExpr:
    """Parse the CLI expression syntax.

    Grammar: terms joined by '+'; term is L(p/q; sh(S)) | M(c,d) | F{a,b,..}
    | C(n) | T(t,S) with S an integer or 2^inf; 'irr' as a Lambda rotation
    drops the term.
    """
    terms = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if chunk.startswith("L(") and chunk.endswith(")"):
            inner = chunk[2:-1]
            rho_text, sh_text = (s.strip() for s in inner.split(";", 1))
            rho = None if rho_text == "irr" else Rat(rho_text)
            m = _re.fullmatch(r"sh\(\s*([^)]+?)\s*\)", sh_text)
            if not m:
                raise ValueError(f"bad Lambda tail in {chunk!r}")
            terms.append(("lambda", rho, ShValue.of(m.group(1))))
        elif chunk.startswith("M(") and chunk.endswith(")"):
            c_text, d_text = chunk[2:-1].split(",")
            terms.append(("m", Rat(c_text.strip()), Rat(d_text.strip())))
        elif chunk.startswith("F{") and chunk.endswith("}"):
            vals = frozenset(int(s) for s in chunk[2:-1].split(",") if s.strip())
            terms.append(("finite", vals))
        elif chunk.startswith("C(") and chunk.endswith(")"):
            terms.append(("cofinite", int(chunk[2:-1])))
        elif chunk.startswith("T(") and chunk.endswith(")"):
            t_text, m_text = chunk[2:-1].split(",", 1)
            terms.append(("scaled_tail", 1, int(t_text), BaldwinValue.of(m_text.strip())))
        else:
            raise ValueError(f"cannot parse term {chunk!r}")
    return PeriodSetExpr(tuple(terms))
