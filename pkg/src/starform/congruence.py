"""Constructive congruence reductions for hermitian and skew-hermitian
matrices over F[t] with t -> -t.

Every public operation returns data wrapped in an exactly verified
Certificate (S unimodular, S* A S = B).  The entry points:

- ``isotropic_vector``: a primitive nonzero v with v* A v = 0.
- ``represent_one`` / ``split_one``: hermitian gcd-1 matrices represent 1
  and split off a (1) block.
- ``her2_diagonalize``: 2x2 hermitian, gcd 1, det != 0 -> diag(1, det A).
- ``sk2_zero_diagonal``: 2x2 skew, gcd 1, det != 0 -> zero diagonal.
- ``sk_split``: n x n skew, gcd 1, det != 0 -> [[0,f],[-f*,0]] (+) D with
  f pure of half the degree of the second invariant factor and f f*
  dividing every entry of D.
- ``block_swap``: congruence between 2x2 zero-diagonal skew blocks whose
  off-diagonal entries share a norm.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .starpoly import (EVEN, StarPoly, canonical_pure_factor,
                       coprime_even_bezout, even_bezout, gcd as poly_gcd,
                       gcd_bezout, gcd_many, is_pure, norm_factor,
                       norm_factor_avoiding, pure_split, solve_norm_equation)
from .polymat import (HERMITIAN, SKEW, Certificate, PolyMatrix, Reduction,
                      apply_matrix, determinant, form_kind, form_value,
                      gcd_of_matrix, kernel_split, smith_form,
                      unimodular_completion, vector_gcd)
from .tower import Tower

_SCAN_CAP = 4096
_SEARCH_ROUNDS = 64


class ReductionError(RuntimeError):
    """A reduction failed to make progress; indicates an invariant violation."""


def _basis_vector(tower: Tower, n: int, i: int, value: Optional[StarPoly] = None):
    v = [StarPoly.zero(tower)] * n
    v[i] = value if value is not None else StarPoly.one(tower)
    return v


# ---------------------------------------------------------------------------
# isotropic vectors
# ---------------------------------------------------------------------------

def compress_form(A: PolyMatrix, passes: int = 10) -> Certificate:
    """Greedy degree reduction of an eps-form under congruence.

    A paired transvection col_j += x col_i (x = -quotient at the worst row
    of column j) is applied when an upper bound on the resulting total
    degree is strictly smaller than the current one; since the bound is an
    upper bound, no undo is ever needed.  Keeps the block recursions from
    snowballing entry degrees."""
    red = Reduction(A)
    n = A.rows
    if n < 2:
        return red.certificate()

    def coldeg(M, j):
        return [e.degree() for e in M.column(j)]

    for _ in range(passes):
        improved = False
        for j in range(n):
            dj = coldeg(red.B, j)
            r = max(range(n), key=lambda k: dj[k])
            if dj[r] <= 0:
                continue
            best = None
            for i in range(n):
                if i == j:
                    continue
                a = red.B.entries[r][i]
                b = red.B.entries[r][j]
                if a.is_zero() or b.is_zero() or a.degree() > b.degree():
                    continue
                q = b // a
                if q.is_zero():
                    continue
                qd = q.degree()
                di = coldeg(red.B, i)
                dii = red.B.entries[i][i].degree()
                delta = 0
                for k in range(n):
                    old = max(dj[k], 0)
                    if k == r:
                        new = max(a.degree() - 1, 0)
                    elif k == j:
                        new = max(dj[k], qd + di[k], 2 * qd + dii, 0)
                    else:
                        new = max(dj[k], qd + di[k], 0)
                    delta += new - old
                if delta < 0 and (best is None or delta < best[0]):
                    best = (delta, i, q)
            if best is not None:
                _, i, q = best
                red.transvection(i, j, -q)
                improved = True
        if not improved:
            break
    return red.certificate()


def isotropic_vector(A: PolyMatrix, kind: int) -> List[StarPoly]:
    """Primitive nonzero v with v* A v = 0.

    Realizes the existence argument over the closure: a zero diagonal entry
    gives a basis vector; otherwise coordinates (i, j) and a norm factor
    w w* = b b* - a c (hermitian) or a c + b b* (skew) build one.  The pair
    is chosen to minimize the degree of the polynomial being factored, and a
    cheap constant-combination scan runs first.
    """
    T = A.tower
    n = A.rows
    for i in range(n):
        if A.entries[i][i].is_zero():
            return _basis_vector(T, n, i)
    if n < 2:
        raise ValueError("a 1x1 matrix with nonzero entry has no isotropic vector")
    best = None
    for i in range(n):
        for j in range(i + 1, n):
            alpha = A.entries[i][i]
            beta = A.entries[i][j]
            gamma = A.entries[j][j]
            bb = beta * beta.star()
            y = bb - alpha * gamma if kind == HERMITIAN else alpha * gamma + bb
            # constants lam with v = e_i + lam e_j isotropic need no factoring
            for m in range(T.p):
                lam = StarPoly.const(T, m)
                probe = alpha + lam * (beta + (beta.star() if kind == HERMITIAN
                                               else -beta.star())) + lam * lam * gamma
                if probe.is_zero():
                    v = _basis_vector(T, n, i)
                    v[j] = lam
                    return v
            if best is None or y.degree() < best[0]:
                best = (y.degree(), i, j, alpha, beta, y)
    _, i, j, alpha, beta, y = best
    w = StarPoly.zero(T) if y.is_zero() else norm_factor(y)
    v = _basis_vector(T, n, j, alpha)
    v[i] = w - beta
    g = vector_gcd(v)
    if not g.is_one():
        v = [e.exact_div(g) for e in v]
    assert form_value(A, v, v).is_zero()
    return v


def _isotropic_to_corner(red: Reduction, kind: int) -> None:
    """Congruence so the (0,0) entry of the working matrix becomes zero."""
    if red.B.entries[0][0].is_zero():
        return
    v = isotropic_vector(red.B, kind)
    red.apply(unimodular_completion(v))
    assert red.B.entries[0][0].is_zero()


def _reduce_row_tail(red: Reduction, target: int) -> None:
    """Column-Euclid on row 0 entries at columns >= 1, collecting their gcd
    at column ``target`` and zeroing the rest (paired row moves mirror it)."""
    T = red.B.tower
    n = red.B.rows
    while True:
        row = red.B.entries[0]
        nz = [j for j in range(1, n) if not row[j].is_zero()]
        if not nz:
            raise ValueError("row tail is zero; matrix is singular")
        piv = min(nz, key=lambda j: (row[j].degree(), j))
        changed = False
        for j in nz:
            if j == piv:
                continue
            q = red.B.entries[0][j] // red.B.entries[0][piv]
            red.transvection(piv, j, -q)
            if not red.B.entries[0][j].is_zero():
                changed = True
        if not changed:
            nz = [j for j in range(1, n) if not red.B.entries[0][j].is_zero()]
            if len(nz) == 1:
                piv = nz[0]
                break
    if piv != target:
        perm = list(range(n))
        perm[piv], perm[target] = perm[target], perm[piv]
        red.permute(perm)


# ---------------------------------------------------------------------------
# representing 1 (hermitian)
# ---------------------------------------------------------------------------

def _homogeneous_bezout(a0: StarPoly, b: StarPoly) -> Tuple[StarPoly, StarPoly]:
    """x homogeneous, y even with a0 x + b y = 1, given a0 homogeneous,
    b even, gcd(a0, b) = 1.  Adjusts so that y(0) != 0."""
    T = a0.tower
    g, u, v = gcd_bezout(a0, b)
    if not g.is_one():
        raise ValueError("a0 and b are not coprime")
    sigma = 1 if a0.star() == a0 else -1
    half = StarPoly.const(T, T.inv(T.elem(2)))
    us = u.star() if sigma == 1 else -u.star()
    x = (u + us) * half
    y = (v + v.star()) * half
    if y.eval(T.zero).is_zero():
        # a0(0) != 0 is forced here (else a0 x + b y = 1 fails at 0)
        x = x - b
        y = y + a0
    assert (a0 * x + b * y).is_one()
    assert y.parity() in (EVEN,) and not y.eval(T.zero).is_zero()
    return x, y


def _vector_bezout(rs: Sequence[StarPoly]) -> Tuple[StarPoly, List[StarPoly]]:
    """(g, w) with sum r_i w_i = g = monic gcd of the r_i."""
    T = rs[0].tower
    g = StarPoly.zero(T)
    w = [StarPoly.zero(T)] * len(rs)
    for i, r in enumerate(rs):
        if r.is_zero():
            continue
        if g.is_zero():
            c = T.inv(r.lc())
            g = r * c
            w[i] = StarPoly.const(T, c)
            continue
        g2, u, v = gcd_bezout(g, r)
        w = [u * x for x in w]
        w[i] = w[i] + v
        g = g2
        if g.is_one():
            break
    # pairwise degree reduction along the relations (w_i, w_j) ->
    # (w_i - q r_j, w_j + q r_i)
    for _ in range(2):
        for i in range(len(rs)):
            for j in range(len(rs)):
                if i == j or rs[j].is_zero() or w[i].is_zero():
                    continue
                if w[i].degree() >= rs[j].degree() > 0:
                    q = w[i] // rs[j]
                    w[i] = w[i] - q * rs[j]
                    w[j] = w[j] + q * rs[i]
    return g, w


def _solve_sesquilinear(aa: StarPoly, rhs: StarPoly, sign: str) -> Optional[StarPoly]:
    """z with aa z + (aa z)* = rhs (sign '+') or aa z - (aa z)* = rhs ('-'),
    or None when the divisibility/parity obstruction blocks it."""
    T = aa.tower
    if rhs.is_zero():
        return StarPoly.zero(T)
    if aa.is_zero():
        return None
    g0, ghat = pure_split(aa)
    q, rem = divmod(rhs, g0)
    if not rem.is_zero():
        return None
    sigma = 1 if g0.star() == g0 else -1
    inner = sign if sigma == 1 else ("-" if sign == "+" else "+")
    try:
        return solve_norm_equation(ghat, q, inner)
    except ValueError:
        return None


def _reduce_frame_columns(V: PolyMatrix) -> PolyMatrix:
    """Degree-reduce the frame basis by column operations that keep row 0 of
    the coordinate change equal to e0 (so frame-candidate pairings survive):
    columns >= 1 reduce each other and column 0, never the other way."""
    cols = [V.column(j) for j in range(V.cols)]
    n = V.cols

    def total_deg(col):
        return sum(max(e.degree(), 0) for e in col)

    changed = True
    passes = 0
    while changed and passes < 6:
        changed = False
        passes += 1
        for i in range(1, n):
            for j in range(n):
                if j == i:
                    continue
                for r in range(len(cols[0])):
                    a, b = cols[i][r], cols[j][r]
                    if a.is_zero() or b.is_zero() or b.degree() < a.degree():
                        continue
                    q = b // a
                    if q.is_zero():
                        continue
                    cand = [cj - q * ci for cj, ci in zip(cols[j], cols[i])]
                    if total_deg(cand) < total_deg(cols[j]):
                        cols[j] = cand
                        changed = True
    return PolyMatrix(V.tower, [[cols[j][i] for j in range(n)]
                                for i in range(len(cols[0]))])


def _frame_conjugators(A: PolyMatrix) -> List[PolyMatrix]:
    """A few deterministic unimodular conjugators giving independent Smith
    frames to search; the identity comes first."""
    T = A.tower
    n = A.rows
    out = [PolyMatrix.identity(T, n)]
    if n < 2:
        return out
    idx = list(range(n))
    perms = [idx[k:] + idx[:k] for k in range(1, n)]
    perms.append(list(reversed(idx)))
    z, o = StarPoly.zero(T), StarPoly.one(T)
    for perm in perms:
        out.append(PolyMatrix(T, [[o if perm[j] == i else z for j in range(n)]
                                  for i in range(n)]))
    t = StarPoly.t(T)
    for x in (o, t):
        M = [list(r) for r in PolyMatrix.identity(T, n).entries]
        M[0][1] = x
        out.append(PolyMatrix(T, M))
        M = [list(r) for r in PolyMatrix.identity(T, n).entries]
        M[n - 1][0] = x
        out.append(PolyMatrix(T, M))
    return out


def _smith_frame_vectors(A: PolyMatrix, eps: int, scale0: StarPoly,
                         mu_count: int = 4):
    """Isotropic vectors v with pairing ideal exactly (scale0), searched in
    Smith sublattice frames {V e0 * scale0, V e_j}.

    Any c = e0 + z e_j + mu e_k maps to a vector whose image under A is
    scale0 times a unimodular image of a primitive column, so only the
    isotropy corrector equation is in question.  Yields candidates lazily."""
    T = A.tower
    n = A.rows
    sign = "+" if eps == HERMITIAN else "-"
    mus = [StarPoly.const(T, m) for m in range(1, mu_count + 1)]
    frames = _frame_conjugators(A)
    if sum(max(e.degree(), 0) for row in A.entries for e in row) > 40 * n * n:
        frames = frames[:1]
    for M in frames:
        A2 = (M.star_transpose() @ A) @ M
        V = _reduce_frame_columns(smith_form(A2).V)
        K_cols = [V.column(j) for j in range(n)]
        if not scale0.is_one():
            K_cols[0] = [scale0 * e for e in K_cols[0]]
        K = PolyMatrix(T, [[K_cols[j][i] for j in range(n)] for i in range(n)])
        G = (K.star_transpose() @ A2) @ K

        def emit(c):
            v = apply_matrix(M, apply_matrix(K, c))
            g = vector_gcd(v)
            if not g.is_one():
                v = [e.exact_div(g) for e in v]
            return v

        base = G.entries[0][0]
        if base.is_zero():
            yield emit(_basis_vector(T, n, 0))
            continue
        for j in range(1, n):
            if not G.entries[j][j].is_zero():
                continue
            aa0 = G.entries[0][j]
            if not aa0.is_zero():
                z = _solve_sesquilinear(aa0, -base, sign)
                if z is not None:
                    c = _basis_vector(T, n, 0)
                    c[j] = z
                    yield emit(c)
            for k in range(1, n):
                if k == j:
                    continue
                gjk = G.entries[j][k]
                g0k = G.entries[0][k]
                gkk = G.entries[k][k]
                for mu in mus:
                    if eps == HERMITIAN:
                        aa = aa0 + mu * gjk.star()
                        rhs = -(base + mu * (g0k + g0k.star())
                                + (mu * mu) * gkk)
                    else:
                        aa = aa0 - mu * gjk.star()
                        rhs = -(base + mu * (g0k - g0k.star())
                                + (mu * mu) * gkk)
                    if aa.is_zero():
                        continue
                    z = _solve_sesquilinear(aa, rhs, sign)
                    if z is None:
                        continue
                    c = _basis_vector(T, n, 0)
                    c[j] = z
                    c[k] = mu
                    yield emit(c)


def _cheap_unit_vector(A: PolyMatrix) -> Optional[List[StarPoly]]:
    """Degree-zero probes for a vector representing 1: a constant unit on
    the diagonal (possibly after a constant two-coordinate mix)."""
    T = A.tower
    n = A.rows
    for i in range(n):
        d = A.entries[i][i]
        if not d.is_zero() and d.degree() == 0:
            s = T.inv(T.sqrt(d.constant_value()))
            return _basis_vector(T, n, i, StarPoly.const(T, s))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            aii = A.entries[i][i]
            ajj = A.entries[j][j]
            mix = A.entries[i][j] + A.entries[j][i]
            for m in range(1, T.p):
                lam = StarPoly.const(T, m)
                probe = aii + lam * mix + lam * lam * ajj
                if not probe.is_zero() and probe.degree() == 0:
                    s = T.inv(T.sqrt(probe.constant_value()))
                    v = _basis_vector(T, n, i, StarPoly.const(T, s))
                    v[j] = lam * StarPoly.const(T, s)
                    return v
    return None


def _hyperbolic_unit_vector(A: PolyMatrix) -> Optional[List[StarPoly]]:
    """Growth-free unit-representing vector for hermitian A with gcd 1:
    search the Smith sublattices for an isotropic v whose pairing ideal is
    (1), then complete it to a hyperbolic pair.  Returns None when no
    corrector solves."""
    T = A.tower
    for v in _smith_frame_vectors(A, HERMITIAN, StarPoly.one(T)):
        if not form_value(A, v, v).is_zero():
            continue
        Av = apply_matrix(A, v)
        g, w = _vector_bezout([e.star() for e in Av])
        if not g.is_one():
            continue
        # f(v, w) = 1; make w isotropic without disturbing the pairing, then
        # u = v/2 + w' has f(u, u) = 1
        beta = form_value(A, w, w)
        rho = beta * T.inv(T.elem(2))
        w2 = [wi - vi * rho for wi, vi in zip(w, v)]
        half = StarPoly.const(T, T.inv(T.elem(2)))
        u = [vi * half + wi for vi, wi in zip(v, w2)]
        if form_value(A, u, u).is_one():
            return u
    return None


def _unit_vector_2x2(red: Reduction) -> List[StarPoly]:
    """In the coordinates of red.B = [[0, a],[a*, b]] (hermitian, gcd 1,
    det != 0), a vector u with f(u, u) = 1."""
    T = red.B.tower
    a = red.B.entries[0][1]
    b = red.B.entries[1][1]
    a0, a1 = pure_split(a)
    x, y = _homogeneous_bezout(a0, b)
    z = norm_factor_avoiding(y, a1)
    w = solve_norm_equation(a1 * z, StarPoly.one(T), "+")
    u = [x.star() * w.star(), z]
    assert form_value(red.B, u, u).is_one()
    return u


def _total_degree(A: PolyMatrix) -> int:
    return sum(max(e.degree(), 0) for row in A.entries for e in row)


def represent_one(A: PolyMatrix) -> List[StarPoly]:
    """v with v* A v = 1 for hermitian A with gcd(A) = 1."""
    T = A.tower
    n = A.rows
    if form_kind(A) != HERMITIAN:
        raise ValueError("represent_one needs a hermitian matrix")
    d, _ = gcd_of_matrix(A)
    if not d.is_one():
        raise ValueError("represent_one needs gcd(A) = 1")
    if n >= 2 and _total_degree(A) > 20 * n * n:
        comp = compress_form(A)
        if _total_degree(comp.B) < _total_degree(A):
            v1 = represent_one(comp.B)
            v = apply_matrix(comp.S, v1)
            assert form_value(A, v, v).is_one()
            return v
    if determinant(A).is_zero():
        cert = kernel_split(A)
        # the zero block leads; its size is the index of the first nonzero row
        k = 0
        while k < n and all(cert.B.entries[k][j].is_zero() for j in range(n)):
            k += 1
        core = cert.B.submatrix(range(k, n), range(k, n))
        v1 = represent_one(core)
        v = [StarPoly.zero(T)] * k + v1
        v = apply_matrix(cert.S, v)
        assert form_value(A, v, v).is_one()
        return v
    if n == 1:
        c = A.entries[0][0].constant_value()
        r = T.inv(T.sqrt(c))
        return [StarPoly.const(T, r)]
    u = _cheap_unit_vector(A)
    if u is not None:
        return u
    u = _hyperbolic_unit_vector(A)
    if u is not None:
        return u
    red = Reduction(A)
    _isotropic_to_corner(red, HERMITIAN)
    if n == 2:
        u = _unit_vector_2x2(red)
        v = apply_matrix(red.S, u)
        assert form_value(A, v, v).is_one()
        return v
    _reduce_row_tail(red, n - 1)
    # scan lambda until the trailing (n-1)-block of the shifted matrix has
    # entry gcd 1; only finitely many scalars fail.  Shifting by lambda only
    # changes the (1, n-1) entry (and its mirror), so the gcd updates
    # incrementally from the gcd of the untouched entries.
    B = red.B
    a0n = B.entries[0][n - 1]
    base = StarPoly.zero(T)
    for i in range(1, n):
        for j in range(1, n):
            if (i, j) in ((1, n - 1), (n - 1, 1)):
                continue
            e = B.entries[i][j]
            if not e.is_zero():
                base = e.monic() if base.is_zero() else poly_gcd(base, e)
            if base.is_one():
                break
        if base.is_one():
            break
    corner = B.entries[1][n - 1]
    lam_poly = None
    count = 0
    for lam in T.enumerate_scalars():
        count += 1
        if count > _SCAN_CAP:
            raise ReductionError("lambda scan failed to reach gcd 1")
        x = StarPoly.const(T, lam)
        moved = corner + x * a0n
        g = base
        for e in (moved, moved.star()):
            if not e.is_zero():
                g = e.monic() if g.is_zero() else poly_gcd(g, e)
        if g.is_one():
            lam_poly = x
            break
    red.transvection(0, 1, lam_poly)
    sub = red.B.submatrix(range(1, n), range(1, n))
    sub_g, _ = gcd_of_matrix(sub)
    assert sub_g.is_one()
    comp = compress_form(sub)
    v1 = represent_one(comp.B)
    v1 = apply_matrix(comp.S, v1)
    v = apply_matrix(red.S, [StarPoly.zero(T)] + v1)
    assert form_value(A, v, v).is_one()
    return v


def split_one(A: PolyMatrix, v: Sequence[StarPoly]) -> Certificate:
    """Congruence (1) (+) A'' from a vector with f(v, v) = 1."""
    T = A.tower
    if not form_value(A, v, v).is_one():
        raise ValueError("split_one needs f(v, v) = 1")
    n = A.rows
    if n == 2:
        # the rotation of the pairing row completes v for free: r = v* A has
        # r . v = f(v,v) = 1 = det S, and w = (-r2, r1) satisfies f(v, w) =
        # r . w = 0 identically, so S* A S = diag(1, f(w, w)) by construction
        r = [form_value(A, v, _basis_vector(T, 2, j)) for j in range(2)]
        w = [-r[1], r[0]]
        S = PolyMatrix(T, [[v[0], w[0]], [v[1], w[1]]])
        B = PolyMatrix(T, [[StarPoly.one(T), StarPoly.zero(T)],
                           [StarPoly.zero(T), form_value(A, w, w)]])
        return Certificate(S, B)
    red = Reduction(A)
    red.apply(unimodular_completion(list(v)))
    for j in range(1, n):
        q = red.B.entries[0][j]
        if not q.is_zero():
            red.transvection(0, j, -q)
    cert = red.certificate()
    assert cert.B.entries[0][0].is_one()
    assert all(cert.B.entries[0][j].is_zero() and cert.B.entries[j][0].is_zero()
               for j in range(1, n))
    return cert


def her2_diagonalize(A: PolyMatrix) -> Certificate:
    """2x2 hermitian, gcd 1, det != 0: congruence to diag(1, det A), exactly."""
    T = A.tower
    if A.rows != 2 or form_kind(A) != HERMITIAN:
        raise ValueError("her2_diagonalize needs a 2x2 hermitian matrix")
    d, _ = gcd_of_matrix(A)
    if not d.is_one():
        raise ValueError("her2_diagonalize needs gcd(A) = 1")
    detA = determinant(A)
    if detA.is_zero():
        raise ValueError("her2_diagonalize needs det(A) != 0")
    v = represent_one(A)
    cert = split_one(A, v)
    red = Reduction(A)
    red.S = cert.S
    red.B = cert.B
    c = determinant(red.S).constant_value()
    red.scale_col(1, StarPoly.const(T, T.inv(c)))
    assert red.B == PolyMatrix.diagonal(T, [StarPoly.one(T), detA])
    return red.certificate()


# ---------------------------------------------------------------------------
# 2x2 skew: zero diagonal
# ---------------------------------------------------------------------------

def sk2_zero_diagonal(A: PolyMatrix) -> Certificate:
    """2x2 skew-hermitian, gcd 1, det != 0: congruence to
    [[0, r],[-r*, 0]] with r = a1 c^2 pure."""
    T = A.tower
    if A.rows != 2 or form_kind(A) != SKEW:
        raise ValueError("sk2_zero_diagonal needs a 2x2 skew-hermitian matrix")
    d, _ = gcd_of_matrix(A)
    if not d.is_one():
        raise ValueError("sk2_zero_diagonal needs gcd(A) = 1")
    if determinant(A).is_zero():
        raise ValueError("sk2_zero_diagonal needs det(A) != 0")
    red = Reduction(A)
    _isotropic_to_corner(red, SKEW)
    a = red.B.entries[0][1]
    b = red.B.entries[1][1]
    if b.is_zero():
        return red.certificate()
    # gcd 1 with b odd forces a(0) != 0, so gcd(a, a*) is even with nonzero
    # constant term and factors as c c* with a1 c pure
    a0, a1 = pure_split(a)
    c = norm_factor_avoiding(a0, a1)
    x, dd = coprime_even_bezout(b, c)
    ccs = c * c.star()
    bcs = b * c.star()
    count = 0
    for lam in T.enumerate_scalars():
        count += 1
        if count > _SCAN_CAP:
            raise ReductionError("sk2 lambda scan failed")
        lp = StarPoly.const(T, lam)
        x_try = x + lp * ccs
        if a1.is_constant() or poly_gcd(a1, x_try).is_one():
            x = x_try
            dd = dd - lp * bcs
            break
    w = solve_norm_equation(-c, b, "-")
    e = x * w.star() - dd.star()
    cx = c * x
    if cx.is_zero():
        # then c dd = 1 and a1 is coprime to 0 only when constant
        v_ = e.exact_div(a1.star())
        p = StarPoly.zero(T)
    else:
        g2, u1, _ = gcd_bezout(a1.star(), cx)
        assert g2.is_one()
        v_ = u1 * e
        if cx.degree() > 0:
            v_ = v_ % cx
        pstar = (a1.star() * v_ - e).exact_div(cx)
        p = pstar.star()
    q = solve_norm_equation(a1.star(), p - p.star(), "-")
    y_ = v_ + cx * q
    z_ = w + c.star() * (p + a1 * q.star())
    S2 = PolyMatrix(T, [[cx, y_], [a1.star() * c.star(), z_]])
    det2 = determinant(S2)
    assert det2.is_one(), "sk2 transform is not in SL_2"
    r = a1 * c * c
    N = PolyMatrix(T, [[StarPoly.zero(T), r],
                       [-r.star(), StarPoly.zero(T)]])
    assert (S2.star_transpose() @ N) @ S2 == red.B, "sk2 identity failed"
    S2inv = PolyMatrix(T, [[z_, -y_], [-(a1.star() * c.star()), cx]])
    red.apply(S2inv)
    assert red.B == N
    return red.certificate()


# ---------------------------------------------------------------------------
# block swap (2x2 zero-diagonal skew blocks with a common norm)
# ---------------------------------------------------------------------------

def _skew_block(f: StarPoly) -> PolyMatrix:
    T = f.tower
    z = StarPoly.zero(T)
    return PolyMatrix(T, [[z, f], [-f.star(), z]])


def block_swap(f: StarPoly, f_new: StarPoly) -> Certificate:
    """Certificate S with S* [[0,f],[-f*,0]] S = [[0,f'],[-f'*,0]].

    Needs f, f' pure with f f* = u^2 f' f'* for a constant u.  Root-sign
    mismatches are swapped one +/- pair at a time; all copies of a value go
    into the swapped factor so the two norms stay coprime.
    """
    T = f.tower
    if not (is_pure(f) and is_pure(f_new)):
        raise ValueError("block_swap needs pure polynomials")
    ratio = f * f.star()
    q, rem = divmod(ratio, f_new * f_new.star())
    if not rem.is_zero() or q.degree() != 0:
        raise ValueError("block_swap needs matching norms up to a unit square")
    A = _skew_block(f)
    red = Reduction(A)
    target_roots = {}
    for r in f_new.roots():
        target_roots[r] = target_roots.get(r, 0) + 1
    cur = f
    guard = 0
    while True:
        guard += 1
        if guard > A.rows * 8 + len(cur.roots()) + 8:
            raise ReductionError("block swap failed to converge")
        cur_roots = {}
        for r in cur.roots():
            cur_roots[r] = cur_roots.get(r, 0) + 1
        mismatch = None
        for r in sorted(cur_roots, key=lambda e: e.key()):
            if target_roots.get(r, 0) != cur_roots[r]:
                mismatch = r
                break
        if mismatch is None:
            break
        k = cur_roots[mismatch]
        nr = T.neg(mismatch)
        if target_roots.get(nr, 0) != k:
            raise ValueError("block_swap root multisets are incompatible")
        b = StarPoly.from_roots(T, [mismatch] * k)
        a = cur.exact_div(b)
        aa = a * a.star()
        bb = b * b.star()
        g, X, Y = even_bezout(bb, aa)
        assert g.is_one()
        x, y = X, -Y
        # S* [[0, ab*],[-a*b, 0]] S = [[0, ab],[-a*b*, 0]] with this S
        S_lem = PolyMatrix(T, [[b.star() * x, a * y], [a.star(), b]])
        S_inv = PolyMatrix(T, [[b, -(a * y)], [-a.star(), b.star() * x]])
        red.apply(S_inv)
        cur = red.B.entries[0][1]
    scale = cur.exact_div(f_new)
    if not scale.is_one():
        assert scale.degree() == 0
        red.scale_col(1, StarPoly.const(T, T.inv(scale.constant_value())))
    assert red.B == _skew_block(f_new)
    return red.certificate()


# ---------------------------------------------------------------------------
# skew split: [[0, f],[-f*, 0]] (+) D
# ---------------------------------------------------------------------------

class SkewSplitResult:
    __slots__ = ("cert", "f", "nu", "D")

    def __init__(self, cert: Certificate, f: StarPoly, nu: int, D: PolyMatrix):
        self.cert = cert
        self.f = f
        self.nu = nu
        self.D = D


def _pairing_degree(B: PolyMatrix, v: Sequence[StarPoly]) -> Tuple[int, StarPoly]:
    g = vector_gcd(apply_matrix(B, list(v)))
    return g.degree(), g


class _PivotSearch:
    """Finds an isotropic vector whose pairing ideal has the certified
    minimal degree nu = deg(f2)/2, then normalizes the matrix so row 0 is
    (0, g, 0, ..., 0) with deg g = nu."""

    def __init__(self, red: Reduction, nu: int, f_target: StarPoly):
        self.red = red
        self.nu = nu
        self.f_target = f_target
        self.T = red.B.tower
        self.n = red.B.rows

    def run(self) -> None:
        red = self.red
        v0 = isotropic_vector(red.B, SKEW)
        self._commit(v0)
        for _ in range(_SEARCH_ROUNDS):
            m = red.B.entries[0][1].degree()
            if m == self.nu:
                return
            if m < self.nu:
                raise ReductionError("pairing degree fell below the Smith bound")
            if self._try_smith_frame(m):
                continue
            if self._try_zero_diagonal_rows(m):
                continue
            if self._try_bezout_pairs(m):
                continue
            if self._try_block_lift(m):
                continue
            _dx_descent(red)
            if self._try_bezout_pairs(red.B.entries[0][1].degree()):
                continue
            if self._try_stir(m):
                continue
            raise ReductionError("skew pivot search stalled above the Smith bound")
        raise ReductionError("skew pivot search exceeded its round budget")

    # -- committing a better pivot --

    def _commit(self, v: Sequence[StarPoly]) -> None:
        g = vector_gcd(list(v))
        if not g.is_one():
            v = [e.exact_div(g) for e in v]
        self.red.apply(unimodular_completion(list(v)))
        assert self.red.B.entries[0][0].is_zero()
        _reduce_row_tail(self.red, 1)

    def _improves(self, v: Sequence[StarPoly], m: int) -> bool:
        if all(e.is_zero() for e in v):
            return False
        if not form_value(self.red.B, v, v).is_zero():
            return False
        deg, _ = _pairing_degree(self.red.B, v)
        return deg < m

    # -- move generators --

    def _try_zero_diagonal_rows(self, m: int) -> bool:
        B = self.red.B
        for k in range(1, self.n):
            if B.entries[k][k].is_zero():
                v = _basis_vector(self.T, self.n, k)
                if self._improves(v, m):
                    self._commit(v)
                    return True
        return False

    def _try_bezout_pairs(self, m: int) -> bool:
        B = self.red.B
        g = B.entries[0][1]
        gs = g.star()
        for k in range(2, self.n):
            if not B.entries[k][k].is_zero():
                continue
            a2k = B.entries[1][k]
            e = poly_gcd(gs, a2k) if not a2k.is_zero() else gs.monic()
            if e.degree() >= m:
                continue
            _, x, z = gcd_bezout(-gs, a2k)
            v = _basis_vector(self.T, self.n, 0, x)
            v[k] = z
            if self._improves(v, m):
                self._commit(v)
                return True
        return False

    def _try_block_lift(self, m: int) -> bool:
        B = self.red.B
        sub = B.submatrix(range(1, self.n), range(1, self.n))
        if sub.is_zero():
            return False
        try:
            v1 = isotropic_vector(sub, SKEW)
        except ValueError:
            return False
        v = [StarPoly.zero(self.T)] + v1
        if self._improves(v, m):
            self._commit(v)
            return True
        return False

    def _try_smith_frame(self, m: int) -> bool:
        """Search the sublattice {v : B v = 0 mod f}, f the canonical pure
        factor of f2: its frame combinations have pairing exactly (f)
        whenever the isotropy corrector solves."""
        count = 0
        for v in _smith_frame_vectors(self.red.B, SKEW, self.f_target):
            if self._improves(v, m):
                self._commit(v)
                return True
            count += 1
            if count > 400:
                break
        return False

    def _try_stir(self, m: int) -> bool:
        import random
        rng = random.Random(0xD1CE + self.n + m)
        t = StarPoly.t(self.T)
        one = StarPoly.one(self.T)
        for _ in range(8):
            i = rng.randrange(1, self.n)
            j = rng.randrange(1, self.n)
            if i == j:
                continue
            x = rng.choice([one, t, t + one])
            self.red.transvection(i, j, x)
            _reduce_row_tail(self.red, 1)
            if self.red.B.entries[0][1].degree() < m:
                return True
            if self._try_smith_frame(m) or self._try_bezout_pairs(m):
                return True
        return False


def _dx_descent(red: Reduction) -> None:
    """Shrink d = gcd(a12, a21, a22) by the Vandermonde lambda-scans until the
    stuck state, where d divides t * (every entry) and hence d in {1, t}.
    Row 0 of the working matrix is preserved exactly."""
    T = red.B.tower
    n = red.B.rows
    t = StarPoly.t(T)
    one = StarPoly.one(T)

    def current_d() -> StarPoly:
        g = red.B.entries[0][1]
        return gcd_many([g, g.star(), red.B.entries[1][1]])

    def lam_scan(s: int, x: StarPoly, d: StarPoly) -> bool:
        """Scan T(1, s, lam*x); succeeds iff d fails to divide a component."""
        a2s = red.B.entries[1][s]
        ass = red.B.entries[s][s]
        w = a2s * x.star() - a2s.star() * x
        v = ass * x * x.star()
        if (w % d).is_zero() and (v % d).is_zero():
            return False
        count = 0
        for lam in T.enumerate_scalars():
            if lam.is_zero():
                continue
            count += 1
            if count > _SCAN_CAP:
                raise ReductionError("d_X lambda scan exhausted")
            lp = StarPoly.const(T, lam)
            cand = red.B.entries[1][1] + lp * w + lp * lp * v
            g = red.B.entries[0][1]
            dtry = gcd_many([g, g.star(), cand])
            if dtry.degree() < d.degree():
                red.transvection(s, 1, lp * x)
                assert red.B.entries[1][1] == cand
                return True
        return False

    while True:
        d = current_d()
        if d.degree() == 0:
            return
        progressed = False
        for s in range(2, n):
            for x in (one, t):
                if lam_scan(s, x, d):
                    progressed = True
                    break
            if progressed:
                break
        if progressed:
            continue
        # neutral premoves: make some trailing diagonal entry escape d, then
        # pull it into reach of the (1, s) scans
        for r in range(2, n):
            if progressed:
                break
            arr = red.B.entries[r][r]
            if not (arr % d).is_zero():
                for x in (one, t):
                    if lam_scan(r, x, d):
                        progressed = True
                        break
                continue
            for s in range(2, n):
                if s == r or progressed:
                    continue
                ars = red.B.entries[r][s]
                ass = red.B.entries[s][s]
                for x in (one, t):
                    w = ars * x.star() - ars.star() * x
                    v = ass * x * x.star()
                    if (w % d).is_zero() and (v % d).is_zero():
                        continue
                    scan = iter(T.enumerate_scalars())
                    found = None
                    for _ in range(4 + 2):
                        lam = next(scan)
                        if lam.is_zero():
                            continue
                        lp = StarPoly.const(T, lam)
                        cand = arr + lp * w + lp * lp * v
                        if not (cand % d).is_zero():
                            found = lp
                            break
                    if found is None:
                        continue
                    red.transvection(s, r, found * x)
                    if lam_scan(r, one, d) or lam_scan(r, t, d):
                        progressed = True
                        break
        if not progressed:
            return


def sk_split(A: PolyMatrix) -> SkewSplitResult:
    """Skew-hermitian A with gcd 1 and det != 0: verified congruence to
    [[0, f],[-f*, 0]] (+) D, f pure of degree deg(f2)/2, f f* | D entrywise."""
    T = A.tower
    n = A.rows
    if form_kind(A) != SKEW:
        raise ValueError("sk_split needs a skew-hermitian matrix")
    d, _ = gcd_of_matrix(A)
    if not d.is_one():
        raise ValueError("sk_split needs gcd(A) = 1")
    if determinant(A).is_zero():
        raise ValueError("sk_split needs det(A) != 0")
    if n < 2:
        raise ValueError("sk_split needs n >= 2")
    if n >= 3 and _total_degree(A) > 20 * n * n:
        comp = compress_form(A)
        if _total_degree(comp.B) < _total_degree(A):
            inner = sk_split(comp.B)
            S = comp.S @ inner.cert.S
            return SkewSplitResult(Certificate(S, inner.cert.B), inner.f,
                                   inner.nu, inner.D)
    factors = smith_form(A).factors
    f2 = factors[1]
    if f2.parity() != EVEN or f2.eval(T.zero).is_zero():
        raise ReductionError("second invariant factor is not an admissible norm")
    nu = f2.degree() // 2
    if n == 2:
        cert = sk2_zero_diagonal(A)
        f = cert.B.entries[0][1]
        assert is_pure(f) and f.degree() == nu
        return SkewSplitResult(cert, f, nu, PolyMatrix.zeros(T, 0, 0))
    f_target = canonical_pure_factor(f2)
    red = Reduction(A)
    _PivotSearch(red, nu, f_target).run()
    _dx_descent(red)
    g = red.B.entries[0][1]
    dX = gcd_many([g, g.star(), red.B.entries[1][1]])
    if not dX.is_one():
        raise ReductionError("d_X did not reach 1 at the minimal pairing degree")
    corner = red.B.submatrix((0, 1), (0, 1))
    c2 = sk2_zero_diagonal(corner)
    red.embed(c2.S, 0)
    f = red.B.entries[0][1]
    assert is_pure(f) and f.degree() == nu
    # minimality of nu forces f | row 0 and f* | row 1 against the rest
    for j in range(2, n):
        e = red.B.entries[0][j]
        if not e.is_zero():
            red.transvection(1, j, -e.exact_div(f))
    fs = f.star()
    for j in range(2, n):
        e = red.B.entries[1][j]
        if not e.is_zero():
            red.transvection(0, j, e.exact_div(fs))
    B = red.B
    for j in range(2, n):
        assert B.entries[0][j].is_zero() and B.entries[1][j].is_zero()
        assert B.entries[j][0].is_zero() and B.entries[j][1].is_zero()
    D = B.submatrix(range(2, n), range(2, n))
    ffs = f * fs
    for row in D.entries:
        for e in row:
            if not (e % ffs).is_zero():
                raise ReductionError("f f* fails to divide the complement")
    q, rem = divmod(f2, ffs)
    assert rem.is_zero() and q.degree() == 0
    return SkewSplitResult(red.certificate(), f, nu, D)
