"""The ring R = F[t] with the involution t -> -t.

Polynomials carry the grading R = R_0 + R_1 (even/odd powers of t).  On top
of plain Euclidean arithmetic this module provides the involution-aware
machinery: purity, the pure/homogeneous splitting, norm factorizations
z z* = y, the norm-equation solvers a x +/- a* x* = b, and the even-Bezout
construction.  All results are exact; operations that factor polynomials may
grow the underlying tower.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from .tower import FieldElem, Tower

EVEN = "even"
ODD = "odd"
MIXED = "mixed"
ZERO = "zero"


class StarPoly:
    """Dense polynomial in t over a Tower; ``coeffs[k]`` is the t^k coefficient.

    Immutable; the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("tower", "coeffs", "_icache")

    def __init__(self, tower: Tower, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.tower = tower
        self.coeffs = tuple(cs)
        self._icache = None

    # ---------------- constructors ----------------

    @staticmethod
    def zero(tower: Tower) -> "StarPoly":
        return StarPoly(tower, ())

    @staticmethod
    def one(tower: Tower) -> "StarPoly":
        return StarPoly(tower, (tower.one,))

    @staticmethod
    def t(tower: Tower) -> "StarPoly":
        return StarPoly(tower, (tower.zero, tower.one))

    @staticmethod
    def const(tower: Tower, c) -> "StarPoly":
        if isinstance(c, int):
            c = tower.elem(c)
        return StarPoly(tower, (c,))

    @staticmethod
    def monomial(tower: Tower, c, k: int) -> "StarPoly":
        if isinstance(c, int):
            c = tower.elem(c)
        return StarPoly(tower, (tower.zero,) * k + (c,))

    @staticmethod
    def from_ints(tower: Tower, ints) -> "StarPoly":
        return StarPoly(tower, [tower.elem(n) for n in ints])

    @staticmethod
    def from_roots(tower: Tower, roots, lead=None) -> "StarPoly":
        out = StarPoly.one(tower) if lead is None else StarPoly.const(tower, lead)
        for r in roots:
            out = out * StarPoly(tower, (tower.neg(r), tower.one))
        return out

    # ---------------- basics ----------------

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0].is_one()

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self) -> FieldElem:
        if not self.coeffs:
            return self.tower.zero
        return self.coeffs[-1]

    def constant_value(self) -> FieldElem:
        if self.degree() > 0:
            raise ValueError("polynomial is not constant")
        return self.coeffs[0] if self.coeffs else self.tower.zero

    def coeff(self, k: int) -> FieldElem:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.tower.zero

    def _ints(self) -> Optional[Tuple[int, ...]]:
        if self._icache is None:
            out = []
            for c in self.coeffs:
                if c.level != 0:
                    self._icache = False
                    return None
                out.append(c.rep)
            self._icache = tuple(out)
        return self._icache if self._icache is not False else None

    def __eq__(self, other):
        if not isinstance(other, StarPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __ne__(self, other):
        result = self.__eq__(other)
        return NotImplemented if result is NotImplemented else not result

    def __hash__(self):
        return hash(tuple(c.key() for c in self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    # ---------------- ring arithmetic ----------------

    def __add__(self, other: "StarPoly") -> "StarPoly":
        T = self.tower
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = T.add(out[i], c)
        return StarPoly(T, out)

    def __sub__(self, other: "StarPoly") -> "StarPoly":
        return self + (-other)

    def __neg__(self) -> "StarPoly":
        T = self.tower
        return StarPoly(T, [T.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        T = self.tower
        if isinstance(other, FieldElem):
            return StarPoly(T, [T.mul(other, c) for c in self.coeffs])
        if isinstance(other, int):
            return self * T.elem(other)
        if self.is_zero() or other.is_zero():
            return StarPoly.zero(T)
        ia, ib = self._ints(), other._ints()
        if ia is not None and ib is not None:
            p = T.p
            out = [0] * (len(ia) + len(ib) - 1)
            for i, x in enumerate(ia):
                if x:
                    for j, y in enumerate(ib):
                        if y:
                            out[i + j] = (out[i + j] + x * y) % p
            cache = T._fp_cache
            return StarPoly(T, [cache[v] for v in out])
        lv = 0
        for c in self.coeffs:
            if c.level > lv:
                lv = c.level
        for c in other.coeffs:
            if c.level > lv:
                lv = c.level
        if lv >= 1 and T._table(lv) is None:
            fused = T.poly_mul_flat(list(self.coeffs), list(other.coeffs), lv)
            if fused is not None:
                return StarPoly(T, fused)
        out = [T.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(other.coeffs):
                if not y.is_zero():
                    out[i + j] = T.add(out[i + j], T.mul(x, y))
        return StarPoly(T, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "StarPoly":
        out = StarPoly.one(self.tower)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other: "StarPoly"):
        T = self.tower
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree() < other.degree():
            return StarPoly.zero(T), self
        ia, ib = self._ints(), other._ints()
        if ia is not None and ib is not None:
            p = T.p
            binv = pow(ib[-1], p - 2, p)
            r = list(ia)
            dq = len(ia) - len(ib)
            q = [0] * (dq + 1)
            for k in range(dq, -1, -1):
                c = (r[k + len(ib) - 1] * binv) % p
                q[k] = c
                if c:
                    for i, g in enumerate(ib):
                        if g:
                            r[k + i] = (r[k + i] - c * g) % p
            cache = T._fp_cache
            return (StarPoly(T, [cache[v] for v in q]),
                    StarPoly(T, [cache[v] for v in r[:len(ib) - 1]]))
        binv = T.inv(other.lc())
        r = list(self.coeffs)
        n = len(other.coeffs)
        dq = len(r) - n
        q = [T.zero] * (dq + 1)
        for k in range(dq, -1, -1):
            c = T.mul(r[k + n - 1], binv)
            q[k] = c
            if not c.is_zero():
                for i, g in enumerate(other.coeffs):
                    if not g.is_zero():
                        r[k + i] = T.sub(r[k + i], T.mul(c, g))
        return StarPoly(T, q), StarPoly(T, r[:n - 1])

    def __floordiv__(self, other: "StarPoly") -> "StarPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "StarPoly") -> "StarPoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "StarPoly") -> "StarPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def divides(self, other: "StarPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def monic(self) -> "StarPoly":
        if self.is_zero() or self.lc().is_one():
            return self
        return self * self.tower.inv(self.lc())

    def shift(self, k: int) -> "StarPoly":
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return StarPoly(self.tower, (self.tower.zero,) * k + self.coeffs)

    # ---------------- involution and grading ----------------

    def star(self) -> "StarPoly":
        T = self.tower
        return StarPoly(T, [T.neg(c) if (k & 1) else c
                            for k, c in enumerate(self.coeffs)])

    def parity(self) -> str:
        if self.is_zero():
            return ZERO
        has_even = any(not c.is_zero() for c in self.coeffs[0::2])
        has_odd = any(not c.is_zero() for c in self.coeffs[1::2])
        if has_even and has_odd:
            return MIXED
        return EVEN if has_even else ODD

    def is_even(self) -> bool:
        return self.parity() in (EVEN, ZERO)

    def is_odd(self) -> bool:
        return self.parity() in (ODD, ZERO)

    def is_homogeneous(self) -> bool:
        return self.parity() != MIXED

    def even_part(self) -> "StarPoly":
        T = self.tower
        return StarPoly(T, [c if (k & 1) == 0 else T.zero
                            for k, c in enumerate(self.coeffs)])

    def odd_part(self) -> "StarPoly":
        return self - self.even_part()

    def eval(self, x) -> FieldElem:
        T = self.tower
        if isinstance(x, int):
            x = T.elem(x)
        acc = T.zero
        for c in reversed(self.coeffs):
            acc = T.add(T.mul(acc, x), c)
        return acc

    def roots(self) -> List[FieldElem]:
        """Roots with multiplicity over the closure (may grow the tower)."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        return self.tower.find_roots(list(self.coeffs))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"StarPoly({self})"


# ---------------- gcd machinery ----------------

def gcd(a: StarPoly, b: StarPoly) -> StarPoly:
    ia, ib = a._ints(), b._ints()
    if ia is not None and ib is not None:
        T = a.tower
        p = T.p
        fa, fb = list(ia), list(ib)
        while fb:
            fa, fb = fb, _imod(fa, fb, p)
        if not fa:
            return StarPoly.zero(T)
        inv = pow(fa[-1], p - 2, p)
        cache = T._fp_cache
        return StarPoly(T, [cache[(c * inv) % p] for c in fa])
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _imod(f: List[int], g: List[int], p: int) -> List[int]:
    if len(f) < len(g):
        return list(f)
    ginv = pow(g[-1], p - 2, p)
    r = list(f)
    for k in range(len(f) - len(g), -1, -1):
        c = (r[k + len(g) - 1] * ginv) % p
        if c:
            for i, gc in enumerate(g):
                if gc:
                    r[k + i] = (r[k + i] - c * gc) % p
    r = r[:len(g) - 1]
    while r and r[-1] == 0:
        r.pop()
    return r


def gcd_many(polys) -> StarPoly:
    it = iter(polys)
    g = next(it)
    for q in it:
        g = gcd(g, q)
        if g.degree() == 0 and not g.is_zero():
            break
    return g.monic()


def gcd_bezout(a: StarPoly, b: StarPoly) -> Tuple[StarPoly, StarPoly, StarPoly]:
    """(g, u, v) with g = gcd(a, b) monic and a u + b v = g, u reduced
    mod b/g so certificates stay small."""
    T = a.tower
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd_bezout(0, 0)")
    r0, r1 = a, b
    u0, u1 = StarPoly.one(T), StarPoly.zero(T)
    v0, v1 = StarPoly.zero(T), StarPoly.one(T)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    c = T.inv(r0.lc())
    g, u, v = r0 * c, u0 * c, v0 * c
    if not b.is_zero():
        bg = b.exact_div(g)
        if bg.degree() > 0 and u.degree() >= bg.degree():
            q2, u = divmod(u, bg)
            v = v + q2 * a.exact_div(g)
    return g, u, v


# ---------------- purity and norms ----------------

def is_pure(a: StarPoly) -> bool:
    """a is pure when gcd(a, a*) = 1."""
    if a.is_zero():
        raise ValueError("purity is undefined for zero")
    return gcd(a, a.star()).is_one()


def pure_split(a: StarPoly) -> Tuple[StarPoly, StarPoly]:
    """a = a0 * a1 with a0 = gcd(a, a*) monic homogeneous and a1 pure."""
    if a.is_zero():
        raise ValueError("cannot split zero")
    a0 = gcd(a, a.star())
    a1 = a.exact_div(a0)
    return a0, a1


def factor_poly(a: StarPoly) -> List[Tuple["StarPoly", int]]:
    """Monic irreducible factors over the coefficient field, with
    multiplicity; never grows the tower."""
    if a.is_zero():
        raise ValueError("cannot factor zero")
    T = a.tower
    return [(StarPoly(T, h), m) for h, m in T.factor_monic(list(a.coeffs))]


def _star_families(y: StarPoly):
    """Group the irreducible factors of y under the involution.

    Returns (m0, pairs, selfstars) where m0 is the multiplicity of t, pairs
    is a list of (h, h_star, mult) with h != h_star, and selfstars lists
    (h, mult) with h* = +/- h.  Every even polynomial decomposes this way
    with balanced pair multiplicities.
    """
    T = y.tower
    t = StarPoly.t(T)
    factors = dict()
    order = []
    for h, m in factor_poly(y):
        factors[h] = m
        order.append(h)
    m0 = factors.pop(t, 0)
    if t in order:
        order.remove(t)
    pairs = []
    selfstars = []
    seen = set()
    for h in order:
        if h in seen or h not in factors:
            continue
        hs = h.star().monic()
        if hs == h:
            selfstars.append((h, factors[h]))
            seen.add(h)
            continue
        if factors.get(hs) != factors[h]:
            raise ValueError("factor multiset is not star symmetric")
        lo, hi = sorted((h, hs), key=lambda f: [c.key() for c in f.coeffs])
        pairs.append((lo, hi, factors[h]))
        seen.add(h)
        seen.add(hs)
    return m0, pairs, selfstars


def _half_split(h: StarPoly) -> StarPoly:
    """For h irreducible with h* = +/- h and h(0) != 0: a pure w with
    w w* = h up to a constant, built from half the Frobenius orbit of one
    root (may grow the tower by one level)."""
    T = h.tower
    d = h.degree()
    if d % 2 != 0:
        raise ValueError("self-star irreducible factors have even degree")
    base = max((c.level for c in h.coeffs), default=0)
    q0 = T.field_order(base)
    mu = T.find_one_root(list(h.coeffs))
    w = StarPoly.one(T)
    t = StarPoly.t(T)
    for _ in range(d // 2):
        w = w * (t - StarPoly.const(T, mu))
        mu = T.pow(mu, q0)
    ratio = (w * w.star()).exact_div(h)
    assert ratio.degree() == 0
    return w


def _norm_factor_build(y: StarPoly, want_pure: bool, pick) -> StarPoly:
    """Shared engine: z with z z* = y.

    ``pick(lo, hi)`` chooses a side for each star-pair (and for the two
    half-orbit candidates of a self-star factor).  With ``want_pure`` the
    self-star factors use full one-sided half-splits so z comes out pure;
    otherwise even self-star multiplicities stay in the ground field.
    """
    T = y.tower
    m0, pairs, selfstars = _star_families(y)
    if m0 % 2 != 0:
        raise ValueError("even polynomial must have even valuation at 0")
    z0 = StarPoly.one(T).shift(m0 // 2)
    for lo, hi, m in pairs:
        z0 = z0 * (pick(lo, hi) ** m)
    for h, m in selfstars:
        if want_pure or m % 2:
            w = _half_split(h)
            ws = w.star().monic()
            w = w.monic()
            use = pick(*sorted((w, ws), key=lambda f: [c.key() for c in f.coeffs]))
            if want_pure:
                z0 = z0 * (use ** m)
            else:
                z0 = z0 * (h ** (m // 2)) * use
        else:
            z0 = z0 * (h ** (m // 2))
    n0 = z0 * z0.star()
    ratio = y.exact_div(n0)
    c = T.sqrt(ratio.constant_value())
    return z0 * c


def norm_factor(y: StarPoly) -> StarPoly:
    """z with z z* = y, for even nonzero y (may grow the tower)."""
    if y.is_zero():
        raise ValueError("norm_factor of zero")
    if y.parity() != EVEN:
        raise ValueError("norm_factor requires an even polynomial")
    return _norm_factor_build(y, False, lambda lo, hi: lo)


def norm_factor_avoiding(y: StarPoly, a1: StarPoly) -> StarPoly:
    """z with z z* = y and a1 z pure; needs y even with y(0) != 0, a1 pure."""
    T = y.tower
    if y.is_zero() or y.parity() != EVEN:
        raise ValueError("norm_factor_avoiding requires an even nonzero polynomial")
    if y.eval(T.zero).is_zero():
        raise ValueError("y(0) = 0 makes a pure factor impossible")
    if not is_pure(a1):
        raise ValueError("a1 must be pure")

    def pick(lo, hi):
        # a factor s may enter z only when no root mu of s has a1(-mu) = 0,
        # i.e. gcd(a1, s*) = 1; purity of a1 rules out both sides failing
        if gcd(a1, lo.star()).is_one():
            return lo
        if gcd(a1, hi.star()).is_one():
            return hi
        raise ValueError("a1 is not pure: both factor sides excluded")

    z = _norm_factor_build(y, True, pick)
    return z


def canonical_pure_factor(h: StarPoly) -> StarPoly:
    """The canonical pure p with p p* = h, for monic even h with h(0) != 0.

    From each +/- root pair the smaller member (canonical field order) is
    taken; the leading constant is fixed by the deterministic square root.
    This pins a unique representative among all valid factorizations.
    """
    T = h.tower
    if h.is_zero() or not h.lc().is_one():
        raise ValueError("canonical_pure_factor needs a monic polynomial")
    if h.parity() != EVEN or h.eval(T.zero).is_zero():
        raise ValueError("canonical_pure_factor needs an even h with h(0) != 0")
    p = _norm_factor_build(h, True, lambda lo, hi: lo)
    if not is_pure(p):
        raise ValueError("h admits no pure norm factorization")
    return p


def solve_norm_equation(a: StarPoly, b: StarPoly, sign: str) -> StarPoly:
    """x with a x + a* x* = b (sign '+') or a x - a* x* = b (sign '-').

    Needs a pure and b of the matching parity (even for '+', odd for '-').
    """
    T = a.tower
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if a.is_zero() or not is_pure(a):
        raise ValueError("a must be pure")
    if b.is_zero():
        return StarPoly.zero(T)
    if sign == "+" and b.parity() != EVEN:
        raise ValueError("'+' norm equation needs an even right-hand side")
    if sign == "-" and b.parity() != ODD:
        raise ValueError("'-' norm equation needs an odd right-hand side")
    astar = a.star()
    g, u, v = gcd_bezout(a, astar)
    assert g.is_one()
    h = b * T.inv(T.elem(2))
    # a y + a* z = b/2 with y reduced mod a*
    y = (u * h) % astar if astar.degree() > 0 else u * h
    z = (h - a * y).exact_div(astar)
    x = y + z.star() if sign == "+" else y - z.star()
    return x


def coprime_even_bezout(a: StarPoly, b: StarPoly) -> Tuple[StarPoly, StarPoly]:
    """(x, y) with a x + b y = 1 and x even; needs gcd(a,b) = 1 and b pure."""
    T = a.tower
    g, u, v = gcd_bezout(a, b)
    if not g.is_one():
        raise ValueError("a and b must be coprime")
    if not is_pure(b):
        raise ValueError("b must be pure")
    rhs = u.star() - u
    z = solve_norm_equation(b, rhs, "-")
    x = u + b * z
    y = v - a * z
    assert x.parity() in (EVEN, ZERO)
    return x, y


def even_bezout(a: StarPoly, b: StarPoly) -> Tuple[StarPoly, StarPoly, StarPoly]:
    """Bezout of two even polynomials carried out inside R_0 = F[t^2], so the
    coefficients come back even: a x + b y = g."""
    T = a.tower
    if not (a.is_even() and b.is_even()):
        raise ValueError("even_bezout needs even inputs")
    sa = StarPoly(T, a.coeffs[0::2])
    sb = StarPoly(T, b.coeffs[0::2])
    g, u, v = gcd_bezout(sa, sb)
    return _inflate(g), _inflate(u), _inflate(v)


def _inflate(s: StarPoly) -> StarPoly:
    T = s.tower
    out = []
    for c in s.coeffs:
        out.append(c)
        out.append(T.zero)
    return StarPoly(T, out[:-1] if out else out)


# ---------------- text form ----------------

def format_poly(a: StarPoly) -> str:
    """Terms c*t^k / t^k / c joined with +/-; residues above p/2 print via
    the '-' separator so e.g. t^2+4 over F_5 renders as t^2-1."""
    T = a.tower
    if a.is_zero():
        return "0"
    parts = []
    for k in range(a.degree(), -1, -1):
        c = a.coeff(k)
        if c.is_zero():
            continue
        neg = False
        if c.level == 0 and c.rep > T.p // 2:
            neg = True
            c = T.neg(c)
        if k == 0:
            body = T.format_elem(c) if c.level == 0 else f"({T.format_elem(c)})"
        else:
            tpow = "t" if k == 1 else f"t^{k}"
            if c.is_one():
                body = tpow
            elif c.level == 0:
                body = f"{T.format_elem(c)}*{tpow}"
            else:
                body = f"({T.format_elem(c)})*{tpow}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"-{body}" if neg else f"+{body}")
    return "".join(parts)


class _Parser:
    def __init__(self, text: str, tower: Tower):
        self.text = text.replace(" ", "")
        self.pos = 0
        self.tower = tower

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            raise ValueError(f"expected '{ch}' at {self.pos} in {self.text!r}")
        self.pos += 1

    def parse(self) -> StarPoly:
        value = self.expr()
        if self.pos != len(self.text):
            raise ValueError(f"trailing input at {self.pos} in {self.text!r}")
        return value

    def expr(self) -> StarPoly:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.pos += 1
            rhs = self.term()
            value = value - rhs if op == "-" else value + rhs
        return value

    def term(self) -> StarPoly:
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.factor()
        return value

    def factor(self) -> StarPoly:
        value = self.atom()
        if self.peek() == "^":
            self.pos += 1
            value = value ** self.integer()
        return value

    def atom(self) -> StarPoly:
        T = self.tower
        ch = self.peek()
        if ch == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        if ch == "t":
            self.pos += 1
            return StarPoly.t(T)
        if ch == "u":
            self.pos += 1
            k = self.integer()
            return StarPoly.const(T, T.generator(k))
        if ch.isdigit():
            return StarPoly.const(T, self.integer())
        raise ValueError(f"unexpected character {ch!r} at {self.pos} in {self.text!r}")

    def integer(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise ValueError(f"expected integer at {start} in {self.text!r}")
        return int(self.text[start:self.pos])


def parse_poly(text: str, tower: Tower) -> StarPoly:
    return _Parser(text, tower).parse()
