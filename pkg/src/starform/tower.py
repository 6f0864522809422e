"""Exact arithmetic in the algebraic closure of F_p, p an odd prime.

The closure is realized as a growing tower F_p = L0 < L1 < L2 < ... where
each level adjoins a root of a monic polynomial irreducible over the level
below.  Levels are append-only: growing the tower never invalidates existing
elements, and arithmetic between elements of different levels lifts to the
higher one.

Elements are immutable values.  Operations that may *grow* the tower
(``find_roots``, ``sqrt``, ``enumerate_scalars``) mutate the Tower and need
exclusive access to it; everything else is safe to run concurrently on a
frozen snapshot.
"""

from __future__ import annotations

import random
from typing import Iterator, List, Optional, Sequence, Tuple

DEFAULT_SEED = 0x5EED


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Level:
    """One extension step: a root of ``minpoly`` (monic, over the level below)."""

    __slots__ = ("name", "minpoly", "degree")

    def __init__(self, name: str, minpoly: Tuple["FieldElem", ...]):
        self.name = name
        self.minpoly = minpoly
        self.degree = len(minpoly) - 1


class FieldElem:
    """Element of the tower.

    ``level == 0``: ``rep`` is an int in [0, p).  ``level >= 1``: ``rep`` is a
    tuple of canonical FieldElems of strictly lower level, length >= 2, last
    entry nonzero (coefficients over the level below).  Canonical form is
    unique, so equality and hashing are structural.
    """

    __slots__ = ("tower", "level", "rep", "_key", "_cint")

    def __init__(self, tower: "Tower", level: int, rep):
        self.tower = tower
        self.level = level
        self.rep = rep
        self._key = None
        self._cint = None

    # -- canonical order key: level-major, then F_p coordinates --

    def key(self):
        if self._key is None:
            self._key = (self.level, self.tower.fp_coords(self, self.level))
        return self._key

    def is_zero(self) -> bool:
        return self.level == 0 and self.rep == 0

    def is_one(self) -> bool:
        return self.level == 0 and self.rep == 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.tower.elem(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.level == other.level and self.rep == other.rep

    def __ne__(self, other):
        result = self.__eq__(other)
        return NotImplemented if result is NotImplemented else not result

    def __hash__(self):
        if self.level == 0:
            return hash(self.rep)
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def __add__(self, other):
        if isinstance(other, int):
            other = self.tower.elem(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.tower.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.tower.elem(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.tower.sub(self, other)

    def __rsub__(self, other):
        return self.tower.elem(other).__sub__(self)

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.tower.elem(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.tower.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.tower.elem(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.tower.div(self, other)

    def __rtruediv__(self, other):
        return self.tower.elem(other).__truediv__(self)

    def __neg__(self):
        return self.tower.neg(self)

    def __pow__(self, e: int):
        return self.tower.pow(self, e)

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        return self.tower.format_elem(self)

    def __repr__(self):
        return f"FieldElem({self})"


_TABLE_LIMIT = 1 << 16
_TABLE_TOO_BIG = "too big"


class _LogTable:
    """Zech-logarithm tables for one finite level: all field operations at
    that level become O(1) integer arithmetic plus lookups."""

    __slots__ = ("q", "exp", "log", "zech", "half")

    def __init__(self, q: int, exp, log, zech):
        self.q = q
        self.exp = exp          # exponent -> canonical FieldElem
        self.log = log          # packed-coordinate int -> exponent
        self.zech = zech        # k -> log(1 + g^k), None when 1 + g^k = 0
        self.half = (q - 1) // 2  # log(-1)


_PACK_BITS = 24
_PACK_MASK = (1 << _PACK_BITS) - 1


class _FlatField:
    """Flat F_p-coordinate arithmetic for levels too large to tabulate:
    multiplication uses the D^2 precomputed basis products (rows packed into
    single integers so a product is one fused multiply-add per term), and
    inversion solves the multiplication-by-a linear system mod p."""

    __slots__ = ("D", "basis_prod", "packed")

    def __init__(self, D: int, basis_prod):
        self.D = D
        self.basis_prod = basis_prod  # [i][j] -> coordinate list of e_i e_j
        self.packed = [[sum(v << (_PACK_BITS * k) for k, v in enumerate(row))
                        for row in rows] for rows in basis_prod]


class Tower:
    """The algebraic closure of F_p as an append-only tower of extensions."""

    def __init__(self, p: int, seed: int = DEFAULT_SEED):
        if not _is_prime(p) or p == 2:
            raise ValueError(f"p must be an odd prime, got {p}")
        self.p = p
        self.levels: List[Level] = []
        self.rng = random.Random(seed)
        self._fp_cache = [FieldElem(self, 0, n) for n in range(p)]
        self.zero = self._fp_cache[0]
        self.one = self._fp_cache[1]
        self._tables: List = [None]
        self._flats: List = [None]
        self._op_counts: List[int] = [0]
        self._coord_sizes: List[int] = [1]
        self._elem_cache: List[dict] = [{}]
        self._mt = [[(x * y) % p for y in range(p)] for x in range(p)]

    # ---------------- basic constructors ----------------

    def elem(self, n: int) -> FieldElem:
        return self._fp_cache[n % self.p]

    def generator(self, level: int) -> FieldElem:
        """The adjoined root that defines ``level`` (level >= 1)."""
        if not 1 <= level <= len(self.levels):
            raise ValueError(f"no generator for level {level}")
        return self._canon(level, [self.zero, self.one])

    def num_levels(self) -> int:
        return len(self.levels)

    def level_degree(self, level: int) -> int:
        return self.levels[level - 1].degree

    def coord_size(self, level: int) -> int:
        """F_p-dimension of the level-``level`` field."""
        sizes = self._coord_sizes
        while len(sizes) <= len(self.levels):
            sizes.append(sizes[-1] * self.levels[len(sizes) - 1].degree)
        return sizes[level]

    def field_order(self, level: int) -> int:
        return self.p ** self.coord_size(level)

    def _canon(self, level: int, coeffs: List[FieldElem]) -> FieldElem:
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            return self.zero
        if len(coeffs) == 1:
            return coeffs[0]
        return FieldElem(self, level, tuple(coeffs))

    def _view(self, a: FieldElem, level: int) -> List[FieldElem]:
        """Coefficient vector of ``a`` over the field below ``level``."""
        if a.level == level:
            return list(a.rep)
        return [a]

    # ---------------- log-table acceleration ----------------

    def cint(self, a: FieldElem) -> int:
        """Packed base-p coordinate integer; valid at every level >= a.level."""
        v = a._cint
        if v is None:
            v = 0
            for d in reversed(a.key()[1]):
                v = v * self.p + d
            a._cint = v
        return v

    def _table(self, level: int) -> Optional[_LogTable]:
        tabs = self._tables
        while len(tabs) <= level:
            tabs.append(None)
        tab = tabs[level]
        if tab is not None:
            return None if tab is _TABLE_TOO_BIG else tab
        q = self.field_order(level)
        if q > _TABLE_LIMIT:
            tabs[level] = _TABLE_TOO_BIG
            return None
        # only invest in the Zech table once this level is hot enough for
        # the O(q) build to pay off; the flat path covers it meanwhile
        counts = self._op_counts
        while len(counts) <= level:
            counts.append(0)
        counts[level] += 1
        if counts[level] * 6 < q:
            return None
        tab = self._build_table(level, q)
        tabs[level] = tab
        return tab

    def _build_table(self, level: int, q: int) -> _LogTable:
        one = self.one
        while True:
            g = self.random_element(level)
            if g.is_zero():
                continue
            exp = [one]
            e = one
            ok = True
            for _ in range(q - 2):
                e = self._mul_flat(e, g, level)
                if e.is_one():
                    ok = False
                    break
                exp.append(e)
            if not ok:
                continue
            if not self._mul_flat(e, g, level).is_one():
                continue
            log = {self.cint(x): i for i, x in enumerate(exp)}
            zech = [None] * (q - 1)
            for k in range(q - 1):
                s = self._add_flat(one, exp[k], level)
                if not s.is_zero():
                    zech[k] = log[self.cint(s)]
            return _LogTable(q, exp, log, zech)

    def _flat(self, level: int) -> _FlatField:
        flats = self._flats
        while len(flats) <= level:
            flats.append(None)
        ff = flats[level]
        if ff is None:
            D = self.coord_size(level)
            basis = [self.from_fp_coords(level, [1 if i == k else 0
                                                 for i in range(D)])
                     for k in range(D)]
            prods = [[list(self.fp_coords(self._mul_slow(basis[i], basis[j]),
                                          level))
                      for j in range(D)] for i in range(D)]
            ff = _FlatField(D, prods)
            flats[level] = ff
        return ff

    def _flat_coords(self, a: FieldElem, D: int) -> Tuple[int, ...]:
        own = a.key()[1]
        if len(own) == D:
            return own
        return own + (0,) * (D - len(own))

    def _elem_from_flat(self, level: int, coords) -> FieldElem:
        """Canonical element from F_p coordinates, memoized per level so the
        nested representation is shared instead of rebuilt."""
        if level == 0:
            return self._fp_cache[coords[0]]
        packed = 0
        for k in range(len(coords) - 1, -1, -1):
            packed = (packed << _PACK_BITS) | coords[k]
        caches = self._elem_cache
        while len(caches) <= level:
            caches.append({})
        cache = caches[level]
        e = cache.get(packed)
        if e is None:
            block = self.coord_size(level - 1)
            deg = self.levels[level - 1].degree
            children = [self._elem_from_flat(level - 1,
                                             coords[i * block:(i + 1) * block])
                        for i in range(deg)]
            e = self._canon(level, children)
            if e.level == level and e._key is None:
                e._key = (level, tuple(coords))
            if len(cache) < 500_000:
                cache[packed] = e
        return e

    def _mul_flat(self, a: FieldElem, b: FieldElem, level: int) -> FieldElem:
        ff = self._flat(level)
        D = ff.D
        p = self.p
        ca = self._flat_coords(a, D)
        cb = self._flat_coords(b, D)
        acc = 0
        packed = ff.packed
        mt = self._mt
        for i, ai in enumerate(ca):
            if not ai:
                continue
            rows = packed[i]
            mrow = mt[ai]
            for j, bj in enumerate(cb):
                if bj:
                    acc += mrow[bj] * rows[j]
        out = [0] * D
        k = 0
        while acc:
            out[k] = (acc & _PACK_MASK) % p
            acc >>= _PACK_BITS
            k += 1
        return self._elem_from_flat(level, out)

    def _add_flat(self, a: FieldElem, b: FieldElem, level: int) -> FieldElem:
        D = self.coord_size(level)
        p = self.p
        ca = self._flat_coords(a, D)
        cb = self._flat_coords(b, D)
        return self._elem_from_flat(level, [(x + y) % p for x, y in zip(ca, cb)])

    def poly_mul_flat(self, ca_elems, cb_elems, level: int):
        """Convolution of two coefficient vectors whose entries live at an
        untabled ``level``: the whole product accumulates in packed integer
        space, materializing only the output coefficients."""
        ff = self._flat(level)
        D = ff.D
        p = self.p
        max_pairs = min(len(ca_elems), len(cb_elems))
        if max_pairs * D * D * (p - 1) * (p - 1) * (p - 1) >= (1 << _PACK_BITS):
            return None
        packed = ff.packed
        mt = self._mt
        sa = [[(i, c) for i, c in enumerate(self._flat_coords(e, D)) if c]
              for e in ca_elems]
        sb = [[(j, c) for j, c in enumerate(self._flat_coords(e, D)) if c]
              for e in cb_elems]
        acc = [0] * (len(sa) + len(sb) - 1)
        for ia, A_ in enumerate(sa):
            if not A_:
                continue
            for ib, B_ in enumerate(sb):
                if not B_:
                    continue
                tot = 0
                for i, ai in A_:
                    rows = packed[i]
                    mrow = mt[ai]
                    for j, bj in B_:
                        tot += mrow[bj] * rows[j]
                acc[ia + ib] += tot
        out = []
        for v in acc:
            coords = [0] * D
            k = 0
            while v:
                coords[k] = (v & _PACK_MASK) % p
                v >>= _PACK_BITS
                k += 1
            out.append(self._elem_from_flat(level, coords))
        return out

    def _inv_flat(self, a: FieldElem, level: int) -> FieldElem:
        ff = self._flat(level)
        D = ff.D
        p = self.p
        ca = self._flat_coords(a, D)
        # columns of multiplication-by-a in the flat basis
        M = [[0] * D for _ in range(D)]
        for i, ai in enumerate(ca):
            if not ai:
                continue
            for j in range(D):
                row = ff.basis_prod[i][j]
                for k in range(D):
                    r = row[k]
                    if r:
                        M[k][j] = (M[k][j] + ai * r) % p
        # solve M x = e_0 mod p
        rhs = [1] + [0] * (D - 1)
        for col in range(D):
            piv = None
            for r in range(col, D):
                if M[r][col]:
                    piv = r
                    break
            if piv is None:
                raise ZeroDivisionError("flat inverse of a non-unit")
            if piv != col:
                M[col], M[piv] = M[piv], M[col]
                rhs[col], rhs[piv] = rhs[piv], rhs[col]
            inv = pow(M[col][col], p - 2, p)
            M[col] = [(v * inv) % p for v in M[col]]
            rhs[col] = (rhs[col] * inv) % p
            for r in range(D):
                if r != col and M[r][col]:
                    f = M[r][col]
                    M[r] = [(vr - f * vc) % p for vr, vc in zip(M[r], M[col])]
                    rhs[r] = (rhs[r] - f * rhs[col]) % p
        return self.from_fp_coords(level, rhs)

    # ---------------- arithmetic ----------------

    def add(self, a: FieldElem, b: FieldElem) -> FieldElem:
        lv = a.level if a.level >= b.level else b.level
        if lv == 0:
            return self._fp_cache[(a.rep + b.rep) % self.p]
        if a.level == 0 and a.rep == 0:
            return b
        if b.level == 0 and b.rep == 0:
            return a
        tab = self._table(lv)
        if tab is None:
            return self._add_flat(a, b, lv)
        ia = tab.log[self.cint(a)]
        ib = tab.log[self.cint(b)]
        z = tab.zech[(ib - ia) % (tab.q - 1)]
        if z is None:
            return self.zero
        return tab.exp[(ia + z) % (tab.q - 1)]

    def _add_slow(self, a: FieldElem, b: FieldElem) -> FieldElem:
        lv = a.level if a.level >= b.level else b.level
        if lv == 0:
            return self._fp_cache[(a.rep + b.rep) % self.p]
        va, vb = self._view(a, lv), self._view(b, lv)
        if len(va) < len(vb):
            va, vb = vb, va
        out = list(va)
        for i, c in enumerate(vb):
            out[i] = self.add(out[i], c)
        return self._canon(lv, out)

    def sub(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return self.add(a, self.neg(b))

    def neg(self, a: FieldElem) -> FieldElem:
        if a.level == 0:
            return self._fp_cache[(-a.rep) % self.p]
        tab = self._table(a.level)
        if tab is not None:
            ia = tab.log[self.cint(a)]
            return tab.exp[(ia + tab.half) % (tab.q - 1)]
        return self._canon(a.level, [self.neg(c) for c in a.rep])

    def mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        lv = a.level if a.level >= b.level else b.level
        if lv == 0:
            return self._fp_cache[(a.rep * b.rep) % self.p]
        tab = self._table(lv)
        if tab is None:
            if (a.level == 0 and a.rep == 0) or (b.level == 0 and b.rep == 0):
                return self.zero
            return self._mul_flat(a, b, lv)
        if (a.level == 0 and a.rep == 0) or (b.level == 0 and b.rep == 0):
            return self.zero
        ia = tab.log[self.cint(a)]
        ib = tab.log[self.cint(b)]
        return tab.exp[(ia + ib) % (tab.q - 1)]

    def _mul_slow(self, a: FieldElem, b: FieldElem) -> FieldElem:
        lv = a.level if a.level >= b.level else b.level
        if lv == 0:
            return self._fp_cache[(a.rep * b.rep) % self.p]
        va, vb = self._view(a, lv), self._view(b, lv)
        conv = [self.zero] * (len(va) + len(vb) - 1)
        for i, x in enumerate(va):
            if x.is_zero():
                continue
            for j, y in enumerate(vb):
                if y.is_zero():
                    continue
                conv[i + j] = self.add(conv[i + j], self.mul(x, y))
        return self._canon(lv, self._reduce_mod_minpoly(lv, conv))

    def _reduce_mod_minpoly(self, level: int, coeffs: List[FieldElem]) -> List[FieldElem]:
        mp = self.levels[level - 1].minpoly
        d = len(mp) - 1
        while len(coeffs) > d:
            lead = coeffs.pop()
            if lead.is_zero():
                continue
            base = len(coeffs) - d
            for i in range(d):
                if not mp[i].is_zero():
                    coeffs[base + i] = self.sub(coeffs[base + i], self.mul(lead, mp[i]))
        return coeffs

    def inv(self, a: FieldElem) -> FieldElem:
        if a.is_zero():
            raise ZeroDivisionError("field inverse of zero")
        if a.level == 0:
            return self._fp_cache[pow(a.rep, self.p - 2, self.p)]
        tab = self._table(a.level)
        if tab is not None:
            ia = tab.log[self.cint(a)]
            return tab.exp[(-ia) % (tab.q - 1)]
        return self._inv_flat(a, a.level)

    def _inv_euclid(self, a: FieldElem) -> FieldElem:
        lv = a.level
        # extended Euclid between rep-polynomial and the minimal polynomial,
        # with coefficient arithmetic one level down
        r0 = list(self.levels[lv - 1].minpoly)
        r1 = self._view(a, lv)
        s0: List[FieldElem] = [self.zero]
        s1: List[FieldElem] = [self.one]
        while True:
            r1 = self._ptrim(r1)
            if len(r1) == 1:
                c = self.inv(r1[0])
                return self._canon(lv, [self.mul(c, x) for x in s1])
            q, r = self._pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self._psub(s0, self._pmul(q, s1))

    def div(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return self.mul(a, self.inv(b))

    def pow(self, a: FieldElem, e: int) -> FieldElem:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return self.one
        if a.level == 0:
            return self._fp_cache[pow(a.rep, e, self.p)]
        tab = self._table(a.level)
        if tab is not None:
            ia = tab.log[self.cint(a)]
            return tab.exp[(ia * e) % (tab.q - 1)]
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- helper polynomial arithmetic on raw coefficient lists (any levels) --

    def _ptrim(self, f: List[FieldElem]) -> List[FieldElem]:
        while len(f) > 1 and f[-1].is_zero():
            f.pop()
        return f or [self.zero]

    def _padd(self, f, g):
        out = list(f) if len(f) >= len(g) else list(g)
        small = g if len(f) >= len(g) else f
        for i, c in enumerate(small):
            out[i] = self.add(out[i], c)
        return self._ptrim(out)

    def _psub(self, f, g):
        return self._padd(f, [self.neg(c) for c in g])

    def _pmul(self, f, g):
        if (len(f) == 1 and f[0].is_zero()) or (len(g) == 1 and g[0].is_zero()):
            return [self.zero]
        out = [self.zero] * (len(f) + len(g) - 1)
        for i, x in enumerate(f):
            if x.is_zero():
                continue
            for j, y in enumerate(g):
                if y.is_zero():
                    continue
                out[i + j] = self.add(out[i + j], self.mul(x, y))
        return self._ptrim(out)

    def _pdivmod(self, f, g):
        f = self._ptrim(list(f))
        g = self._ptrim(list(g))
        if len(g) == 1 and g[0].is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ginv = self.inv(g[-1])
        dq = len(f) - len(g)
        if dq < 0 or (len(f) == 1 and f[0].is_zero()):
            return [self.zero], f
        q = [self.zero] * (dq + 1)
        r = list(f)
        for k in range(dq, -1, -1):
            c = self.mul(r[k + len(g) - 1], ginv)
            q[k] = c
            if not c.is_zero():
                for i, gc in enumerate(g):
                    r[k + i] = self.sub(r[k + i], self.mul(c, gc))
        return self._ptrim(q), self._ptrim(r)

    def _pmod(self, f, g):
        return self._pdivmod(f, g)[1]

    def _pgcd(self, f, g):
        f = self._ptrim(list(f))
        g = self._ptrim(list(g))
        while not (len(g) == 1 and g[0].is_zero()):
            f, g = g, self._pmod(f, g)
        if len(f) == 1 and f[0].is_zero():
            return f
        c = self.inv(f[-1])
        return [self.mul(c, x) for x in f]

    def _pmonic(self, f):
        f = self._ptrim(list(f))
        if f[-1].is_one():
            return f
        c = self.inv(f[-1])
        return [self.mul(c, x) for x in f]

    def _ppowmod(self, f, e: int, m):
        result = [self.one]
        base = self._pmod(f, m)
        while e:
            if e & 1:
                result = self._pmod(self._pmul(result, base), m)
            base = self._pmod(self._pmul(base, base), m)
            e >>= 1
        return result

    def _peval(self, f, x: FieldElem) -> FieldElem:
        acc = self.zero
        for c in reversed(f):
            acc = self.add(self.mul(acc, x), c)
        return acc

    # ---------------- F_p coordinates ----------------

    def fp_coords(self, a: FieldElem, level: Optional[int] = None) -> Tuple[int, ...]:
        """Coordinates of ``a`` in the F_p tensor basis of ``level``."""
        if level is None:
            level = a.level
        if level == 0:
            return (a.rep,)
        block = self.coord_size(level - 1)
        deg = self.levels[level - 1].degree
        vec = self._view(a, level)
        out: List[int] = []
        for i in range(deg):
            if i < len(vec):
                out.extend(self.fp_coords(vec[i], level - 1))
            else:
                out.extend([0] * block)
        return tuple(out)

    def from_fp_coords(self, level: int, coords: Sequence[int]) -> FieldElem:
        if level == 0:
            return self.elem(coords[0])
        return self._elem_from_flat(level, [c % self.p for c in coords])

    def random_element(self, level: int, rng: Optional[random.Random] = None) -> FieldElem:
        rng = rng or self.rng
        coords = [rng.randrange(self.p) for _ in range(self.coord_size(level))]
        return self.from_fp_coords(level, coords)

    # ---------------- tower growth ----------------

    def grow(self, minpoly: Sequence[FieldElem]) -> FieldElem:
        """Append a level with the given monic minimal polynomial; return its root."""
        mp = self._pmonic(list(minpoly))
        if len(mp) < 3:
            raise ValueError("minimal polynomial must have degree >= 2")
        top = len(self.levels)
        for c in mp:
            if c.level > top:
                raise ValueError("minimal polynomial coefficients exceed tower top")
        name = f"u{len(self.levels) + 1}"
        self.levels.append(Level(name, tuple(mp)))
        return self.generator(len(self.levels))

    def _find_nonsquare(self, level: int) -> FieldElem:
        """Deterministically the first non-square at ``level`` (field order)."""
        q = self.field_order(level)
        n = self.coord_size(level)
        idx = 2
        while True:
            coords = []
            m = idx
            for _ in range(n):
                coords.append(m % self.p)
                m //= self.p
            c = self.from_fp_coords(level, coords)
            if not c.is_zero() and not self.pow(c, (q - 1) // 2).is_one():
                return c
            idx += 1

    def grow_quadratic(self) -> FieldElem:
        """Grow the tower by the smallest pure quadratic x^2 - c, c a non-square."""
        top = len(self.levels)
        c = self._find_nonsquare(top)
        return self.grow([self.neg(c), self.zero, self.one])

    # ---------------- root finding ----------------

    def find_roots(self, coeffs: Sequence[FieldElem]) -> List[FieldElem]:
        """All roots of the polynomial with multiplicity, growing the tower as
        needed so the polynomial splits completely.  Deterministic given the
        tower seed."""
        f = self._ptrim(list(coeffs))
        if len(f) == 1 and f[0].is_zero():
            raise ValueError("zero polynomial has no well-defined roots")
        if len(f) == 1:
            return []
        f = self._pmonic(f)
        roots: List[FieldElem] = []
        # squarefree split: stack of (poly, multiplicity)
        stack: List[Tuple[List[FieldElem], int]] = [(f, 1)]
        squarefree: List[Tuple[List[FieldElem], int]] = []
        while stack:
            g, m = stack.pop()
            g = self._pmonic(g)
            if len(g) == 2:
                roots.extend([self.neg(g[0])] * m)
                continue
            if len(g) == 1:
                continue
            dg = self._pderiv(g)
            if len(dg) == 1 and dg[0].is_zero():
                # g = h(t^p) = (frobenius-root h)(t)^p in characteristic p
                h = [self._pth_root(g[i]) for i in range(0, len(g), self.p)]
                stack.append((h, m * self.p))
                continue
            d = self._pgcd(g, dg)
            if len(d) == 1:
                squarefree.append((g, m))
            else:
                q, r = self._pdivmod(g, d)
                assert len(r) == 1 and r[0].is_zero()
                stack.append((d, m))
                stack.append((q, m))
        for g, m in squarefree:
            for root in self._roots_squarefree(g):
                roots.extend([root] * m)
        roots.sort(key=lambda r: r.key())
        return roots

    def _pderiv(self, f):
        if len(f) == 1:
            return [self.zero]
        return self._ptrim([self.mul(self.elem(i), f[i]) for i in range(1, len(f))])

    def _pth_root(self, c: FieldElem) -> FieldElem:
        # Frobenius is an automorphism of every finite level; its inverse on
        # the field of order q is x -> x^(q/p)
        q = self.field_order(max(c.level, 0))
        if q == self.p:
            return c
        return self.pow(c, q // self.p)

    def _roots_squarefree(self, f) -> List[FieldElem]:
        roots: List[FieldElem] = []
        pending = [f]
        while pending:
            g = self._pmonic(pending.pop())
            base = max((c.level for c in g), default=0)
            lin, irred = self._factor_over_level(g, base)
            roots.extend(lin)
            irred.sort(key=lambda h: (len(h), [c.key() for c in h]))
            for idx, h in enumerate(irred):
                d = len(h) - 1
                # roots of an irreducible of degree d over the base level live
                # in any existing level whose field contains F_{q_base^d}
                unit = self.coord_size(base) * d
                target = None
                for lv in range(base + 1, len(self.levels) + 1):
                    if self.coord_size(lv) % unit == 0:
                        target = lv
                        break
                if target is not None:
                    got = self._roots_in_level(h, target)
                    assert len(got) == d
                    roots.extend(got)
                    continue
                top = len(self.levels)
                if base < top:
                    # h may break into smaller pieces over the top field
                    lin2, irred2 = self._factor_over_level(h, top)
                    roots.extend(lin2)
                    irred2.sort(key=lambda hh: (len(hh), [c.key() for c in hh]))
                    if irred2:
                        roots.extend(self._grow_with_orbit(irred2[0]))
                        pending.extend(irred2[1:])
                    pending.extend(irred[idx + 1:])
                    break
                roots.extend(self._grow_with_orbit(h))
                # remaining factors may now split in the new level
                pending.extend(irred[idx + 1:])
                break
        return roots

    def _grow_with_orbit(self, minpoly) -> List[FieldElem]:
        """Adjoin a root of an irreducible-over-top polynomial; its full root
        set is the Frobenius orbit of the new generator."""
        q_prev = self.field_order(len(self.levels))
        gen = self.grow(minpoly)
        out = []
        r = gen
        for _ in range(len(minpoly) - 1):
            out.append(r)
            r = self.pow(r, q_prev)
        return out

    def _roots_in_level(self, h, level: int) -> List[FieldElem]:
        """All roots of h inside the given existing level (h splits there)."""
        q = self.field_order(level)
        x = [self.zero, self.one]
        v = self._ppowmod(x, q, h)
        g = self._pgcd(self._psub(v, x), h)
        return [self.neg(c[0])
                for c in self._equal_degree_split(g, 1, q, level)]

    def _factor_over_level(self, f, level: int
                           ) -> Tuple[List[FieldElem], List[List[FieldElem]]]:
        """Factor squarefree monic f over the field at ``level`` (which must
        contain all its coefficients).

        Returns (roots at that level, irreducible factors of degree >= 2).
        """
        q = self.field_order(level)
        lin: List[FieldElem] = []
        irred: List[List[FieldElem]] = []
        f = self._pmonic(list(f))
        x = [self.zero, self.one]
        # distinct-degree factorization
        v = self._pmod(x, f)
        d = 0
        while len(f) - 1 >= 2 * (d + 1):
            d += 1
            v = self._ppowmod(v, q, f)
            g = self._pgcd(self._psub(v, x), f)
            if len(g) > 1:
                for h in self._equal_degree_split(g, d, q, level):
                    if d == 1:
                        lin.append(self.neg(h[0]))
                    else:
                        irred.append(h)
                f = self._pdivmod(f, g)[0]
                v = self._pmod(v, f)
        if len(f) > 1:
            if len(f) == 2:
                lin.append(self.neg(f[0]))
            else:
                irred.append(f)
        return lin, irred

    def _equal_degree_split(self, g, d: int, q: int,
                            level: int) -> List[List[FieldElem]]:
        """Cantor-Zassenhaus split of g into monic irreducibles of degree d
        over the field at ``level``."""
        out: List[List[FieldElem]] = []
        work = [self._pmonic(list(g))]
        e = (q ** d - 1) // 2
        while work:
            h = work.pop()
            if len(h) - 1 == d:
                out.append(h)
                continue
            while True:
                r = [self.random_element(level) for _ in range(len(h) - 1)]
                r = self._ptrim(r)
                if len(r) == 1 and r[0].is_zero():
                    continue
                w = self._ppowmod(r, e, h)
                w = self._psub(w, [self.one])
                u = self._pgcd(w, h)
                if 1 < len(u) < len(h):
                    work.append(u)
                    work.append(self._pdivmod(h, u)[0])
                    break
        out.sort(key=lambda h: (len(h), [c.key() for c in h]))
        return out

    # ---------------- factorization without growth ----------------

    def factor_monic(self, coeffs: Sequence[FieldElem]
                     ) -> List[Tuple[List[FieldElem], int]]:
        """Factor a nonzero polynomial into monic irreducibles over the
        smallest level containing its coefficients, with multiplicities.
        Never grows the tower."""
        f = self._ptrim(list(coeffs))
        if len(f) == 1 and f[0].is_zero():
            raise ValueError("cannot factor the zero polynomial")
        f = self._pmonic(f)
        base = max((c.level for c in f), default=0)
        out: List[Tuple[List[FieldElem], int]] = []

        def record(h, m):
            for k, (h2, m2) in enumerate(out):
                if h2 == h:
                    out[k] = (h2, m2 + m)
                    return
            out.append((h, m))

        stack: List[Tuple[List[FieldElem], int]] = [(f, 1)]
        while stack:
            g, m = stack.pop()
            g = self._pmonic(g)
            if len(g) == 1:
                continue
            if len(g) == 2:
                record(g, m)
                continue
            dg = self._pderiv(g)
            if len(dg) == 1 and dg[0].is_zero():
                h = [self._pth_root(g[i]) for i in range(0, len(g), self.p)]
                stack.append((h, m * self.p))
                continue
            d = self._pgcd(g, dg)
            if len(d) == 1:
                lin, irred = self._factor_over_level(g, base)
                for root in lin:
                    record([self.neg(root), self.one], m)
                for h in irred:
                    record(h, m)
            else:
                q, r = self._pdivmod(g, d)
                assert len(r) == 1 and r[0].is_zero()
                stack.append((d, m))
                stack.append((q, m))
        out.sort(key=lambda hm: (len(hm[0]), [c.key() for c in hm[0]]))
        return out

    def find_one_root(self, coeffs: Sequence[FieldElem]) -> FieldElem:
        """One root of a polynomial irreducible over the level of its
        coefficients; prefers cheap extraction in small existing levels and
        otherwise grows the tower (the new generator is a root)."""
        h = self._pmonic(self._ptrim(list(coeffs)))
        d = len(h) - 1
        if d == 1:
            return self.neg(h[0])
        base = max((c.level for c in h), default=0)
        unit = self.coord_size(base) * d
        for lv in range(base + 1, len(self.levels) + 1):
            if self.coord_size(lv) % unit == 0 \
                    and self.field_order(lv) <= _TABLE_LIMIT:
                roots = self._roots_in_level(h, lv)
                roots.sort(key=lambda r: r.key())
                return roots[0]
        top = len(self.levels)
        if base < top:
            lin, irred = self._factor_over_level(h, top)
            if lin:
                lin.sort(key=lambda r: r.key())
                return lin[0]
            irred.sort(key=lambda hh: (len(hh), [c.key() for c in hh]))
            return self.grow(irred[0])
        return self.grow(h)

    # ---------------- square roots ----------------

    def sqrt(self, a: FieldElem) -> FieldElem:
        """Deterministic square root (smallest root in the canonical order);
        may grow the tower by one quadratic level."""
        if a.is_zero():
            return self.zero
        roots = self.find_roots([self.neg(a), self.zero, self.one])
        return roots[0]

    # ---------------- scalar enumeration ----------------

    def enumerate_scalars(self) -> Iterator[FieldElem]:
        """Deterministic stream 0, 1, ..., p-1, then the proper elements of
        each successive level.  Grows the tower (quadratically) when the
        stream outruns it.  Never repeats; reaches every element of any fixed
        finite level eventually."""
        for n in range(self.p):
            yield self._fp_cache[n]
        level = 1
        while True:
            if len(self.levels) < level:
                self.grow_quadratic()
            lo = self.p ** self.coord_size(level - 1)
            hi = self.p ** self.coord_size(level)
            n_coords = self.coord_size(level)
            for idx in range(lo, hi):
                coords = []
                m = idx
                for _ in range(n_coords):
                    coords.append(m % self.p)
                    m //= self.p
                yield self.from_fp_coords(level, coords)
            level += 1

    # ---------------- text form ----------------

    def format_elem(self, a: FieldElem) -> str:
        """Prime-field elements as decimal ints; extension elements as
        polynomial expressions in the generator names."""
        if a.level == 0:
            return str(a.rep)
        name = self.levels[a.level - 1].name
        terms = []
        for i in range(len(a.rep) - 1, -1, -1):
            c = a.rep[i]
            if c.is_zero():
                continue
            if i == 0:
                terms.append(self.format_elem(c))
                continue
            power = name if i == 1 else f"{name}^{i}"
            if c.is_one():
                terms.append(power)
            else:
                cs = self.format_elem(c)
                if c.level > 0:
                    cs = f"({cs})"
                terms.append(f"{cs}*{power}")
        return "+".join(terms) if terms else "0"

    def describe_levels(self) -> List[str]:
        """Header lines defining each generator by its minimal polynomial."""
        out = []
        for k, lv in enumerate(self.levels, start=1):
            terms = []
            for i in range(lv.degree, -1, -1):
                c = lv.minpoly[i]
                if c.is_zero():
                    continue
                if i == 0:
                    term = self.format_elem(c)
                elif i == 1:
                    term = lv.name
                else:
                    term = f"{lv.name}^{i}"
                if 0 < i and not c.is_one():
                    cs = self.format_elem(c)
                    if c.level > 0:
                        cs = f"({cs})"
                    term = f"{cs}*{term}"
                terms.append(term)
            out.append(f"{lv.name}: {'+'.join(terms)} = 0")
        return out
