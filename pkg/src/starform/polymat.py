"""Matrices over R = F[t]: star-transpose, determinants, Smith normal form
with transformation matrices, unimodular completion, zero-block splitting,
and congruence-move accumulation with verified certificates.

Matrices are immutable; all operations are exact.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .starpoly import EVEN, ODD, StarPoly, gcd as poly_gcd
from .tower import Tower

HERMITIAN = 1
SKEW = -1


class PolyMatrix:
    __slots__ = ("tower", "rows", "cols", "entries")

    def __init__(self, tower: Tower, entries):
        rows = tuple(tuple(row) for row in entries)
        self.tower = tower
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")
        self.entries = rows

    # ---------------- constructors ----------------

    @staticmethod
    def zeros(tower: Tower, rows: int, cols: int) -> "PolyMatrix":
        z = StarPoly.zero(tower)
        return PolyMatrix(tower, [[z] * cols for _ in range(rows)])

    @staticmethod
    def identity(tower: Tower, n: int) -> "PolyMatrix":
        z, o = StarPoly.zero(tower), StarPoly.one(tower)
        return PolyMatrix(tower, [[o if i == j else z for j in range(n)]
                                  for i in range(n)])

    @staticmethod
    def from_rows(tower: Tower, rows: Sequence[Sequence[StarPoly]]) -> "PolyMatrix":
        return PolyMatrix(tower, rows)

    @staticmethod
    def block_diag(tower: Tower, blocks: Sequence["PolyMatrix"]) -> "PolyMatrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[StarPoly.zero(tower) for _ in range(m)] for _ in range(n)]
        r = c = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r + i][c + j] = b.entries[i][j]
            r += b.rows
            c += b.cols
        return PolyMatrix(tower, out)

    @staticmethod
    def diagonal(tower: Tower, diag: Sequence[StarPoly]) -> "PolyMatrix":
        n = len(diag)
        z = StarPoly.zero(tower)
        return PolyMatrix(tower, [[diag[i] if i == j else z for j in range(n)]
                                  for i in range(n)])

    # ---------------- basics ----------------

    def __getitem__(self, ij: Tuple[int, int]) -> StarPoly:
        return self.entries[ij[0]][ij[1]]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __ne__(self, other):
        result = self.__eq__(other)
        return NotImplemented if result is NotImplemented else not result

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(self.tower,
                          [[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(self.tower,
                          [[a - b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(self.tower, [[-a for a in row] for row in self.entries])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        z = StarPoly.zero(self.tower)
        ocols = list(zip(*other.entries)) if other.entries else []
        out = []
        for row in self.entries:
            orow = []
            for col in ocols:
                acc = z
                for a, b in zip(row, col):
                    if a.coeffs and b.coeffs:
                        acc = acc + a * b
                orow.append(acc)
            out.append(orow)
        return PolyMatrix(self.tower, out)

    def scale(self, c: StarPoly) -> "PolyMatrix":
        return PolyMatrix(self.tower, [[c * a for a in row] for row in self.entries])

    def exact_div(self, c: StarPoly) -> "PolyMatrix":
        return PolyMatrix(self.tower,
                          [[a.exact_div(c) for a in row] for row in self.entries])

    def star_transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.tower,
                          [[self.entries[j][i].star() for j in range(self.rows)]
                           for i in range(self.cols)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.tower,
                          [[self.entries[i][j] for j in cols] for i in rows])

    def column(self, j: int) -> List[StarPoly]:
        return [self.entries[i][j] for i in range(self.rows)]

    def row(self, i: int) -> List[StarPoly]:
        return list(self.entries[i])

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(e) for e in row) + "]"
                               for row in self.entries) + "]"

    __repr__ = __str__


# ---------------- form structure ----------------

def form_kind(A: PolyMatrix) -> Optional[int]:
    """+1 for hermitian, -1 for skew-hermitian, None for neither.

    The zero matrix is both; hermitian is reported.
    """
    st = A.star_transpose()
    if st == A:
        return HERMITIAN
    if st == -A:
        return SKEW
    return None


def form_value(A: PolyMatrix, v: Sequence[StarPoly], w: Sequence[StarPoly]) -> StarPoly:
    """The sesquilinear value v* A w."""
    acc = StarPoly.zero(A.tower)
    for i in range(A.rows):
        vi = v[i]
        if vi.is_zero():
            continue
        vis = vi.star()
        for j in range(A.cols):
            if not A.entries[i][j].is_zero() and not w[j].is_zero():
                acc = acc + vis * A.entries[i][j] * w[j]
    return acc


def apply_matrix(A: PolyMatrix, v: Sequence[StarPoly]) -> List[StarPoly]:
    out = []
    for i in range(A.rows):
        acc = StarPoly.zero(A.tower)
        for j in range(A.cols):
            if not A.entries[i][j].is_zero() and not v[j].is_zero():
                acc = acc + A.entries[i][j] * v[j]
        out.append(acc)
    return out


def gcd_of_matrix(A: PolyMatrix) -> Tuple[StarPoly, str]:
    """Monic gcd of all entries and its parity tag.

    For a nonzero hermitian/skew-hermitian matrix the entry ideal is
    star-invariant, so the generator is homogeneous (even or odd).
    """
    entries = [e for row in A.entries for e in row if not e.is_zero()]
    if not entries:
        raise ValueError("gcd of the zero matrix")
    g = entries[0].monic()
    for e in entries[1:]:
        if g.is_one():
            break
        g = poly_gcd(g, e)
    return g, g.parity()


# ---------------- determinant (fraction-free) ----------------

def determinant(A: PolyMatrix) -> StarPoly:
    if not A.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    T = A.tower
    if n == 0:
        return StarPoly.one(T)
    M = [list(row) for row in A.entries]
    sign = 1
    prev = StarPoly.one(T)
    for k in range(n - 1):
        if M[k][k].is_zero():
            pivot = None
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    pivot = i
                    break
            if pivot is None:
                return StarPoly.zero(T)
            M[k], M[pivot] = M[pivot], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]).exact_div(prev)
            M[i][k] = StarPoly.zero(T)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return -d if sign < 0 else d


def is_unimodular(S: PolyMatrix) -> bool:
    d = determinant(S)
    return d.degree() == 0 and not d.is_zero()


def inverse(S: PolyMatrix) -> "PolyMatrix":
    """Inverse of a unimodular matrix via the adjugate (det is a unit)."""
    d = determinant(S)
    if d.is_zero() or d.degree() > 0:
        raise ValueError("matrix is not unimodular")
    n = S.rows
    T = S.tower
    dinv = T.inv(d.constant_value())
    out = [[StarPoly.zero(T)] * n for _ in range(n)]
    idx = list(range(n))
    for i in range(n):
        for j in range(n):
            sub = S.submatrix([r for r in idx if r != j], [c for c in idx if c != i])
            m = determinant(sub) if n > 1 else StarPoly.one(T)
            if (i + j) % 2:
                m = -m
            out[i][j] = m * dinv
    return PolyMatrix(T, out)


# ---------------- Smith normal form ----------------

class SmithForm:
    """U A V = D with U, V unimodular, D diagonal, monic divisibility chain."""

    __slots__ = ("U", "V", "D", "factors")

    def __init__(self, U: PolyMatrix, V: PolyMatrix, D: PolyMatrix,
                 factors: Tuple[StarPoly, ...]):
        self.U = U
        self.V = V
        self.D = D
        self.factors = factors


def smith_form(A: PolyMatrix) -> SmithForm:
    T = A.tower
    m, n = A.rows, A.cols
    M = [list(row) for row in A.entries]
    U = [list(row) for row in PolyMatrix.identity(T, m).entries]
    V = [list(row) for row in PolyMatrix.identity(T, n).entries]

    def row_op(i, j, q):  # row_i -= q * row_j  (on M and U)
        for k in range(n):
            M[i][k] = M[i][k] - q * M[j][k]
        for k in range(m):
            U[i][k] = U[i][k] - q * U[j][k]

    def col_op(i, j, q):  # col_i -= q * col_j  (on M and V)
        for k in range(m):
            M[k][i] = M[k][i] - q * M[k][j]
        for k in range(n):
            V[k][i] = V[k][i] - q * V[k][j]

    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for k in range(m):
            M[k][i], M[k][j] = M[k][j], M[k][i]
        for k in range(n):
            V[k][i], V[k][j] = V[k][j], V[k][i]

    for k in range(min(m, n)):
        while True:
            # minimal-degree nonzero pivot, ties row-major
            pivot = None
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    e = M[i][j]
                    if not e.is_zero() and (best is None or e.degree() < best):
                        best = e.degree()
                        pivot = (i, j)
            if pivot is None:
                break
            if pivot != (k, k):
                if pivot[0] != k:
                    row_swap(k, pivot[0])
                if pivot[1] != k:
                    col_swap(k, pivot[1])
            dirty = False
            for i in range(k + 1, m):
                if not M[i][k].is_zero():
                    q = M[i][k] // M[k][k]
                    row_op(i, k, q)
                    if not M[i][k].is_zero():
                        dirty = True
            for j in range(k + 1, n):
                if not M[k][j].is_zero():
                    q = M[k][j] // M[k][k]
                    col_op(j, k, q)
                    if not M[k][j].is_zero():
                        dirty = True
            if dirty:
                continue
            # enforce divisibility of the remaining block by the pivot
            culprit = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if not (M[i][j] % M[k][k]).is_zero():
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            row_op(k, culprit, StarPoly.const(T, -1))  # row_k += row_culprit
        if M[k][k].is_zero():
            break
        if not M[k][k].lc().is_one():
            c = T.inv(M[k][k].lc())
            cp = StarPoly.const(T, c)
            for j in range(n):
                M[k][j] = cp * M[k][j]
            for j in range(m):
                U[k][j] = cp * U[k][j]

    factors = tuple(M[i][i] if i < n else StarPoly.zero(T) for i in range(min(m, n)))
    return SmithForm(PolyMatrix(T, U), PolyMatrix(T, V), PolyMatrix(T, M), factors)


def invariant_factors(A: PolyMatrix) -> Tuple[StarPoly, ...]:
    return smith_form(A).factors


# ---------------- certificates and congruence moves ----------------

class Certificate:
    """A verified congruence: S unimodular with S* A S = B."""

    __slots__ = ("S", "B")

    def __init__(self, S: PolyMatrix, B: PolyMatrix):
        self.S = S
        self.B = B

    def verify(self, A: PolyMatrix) -> bool:
        if not is_unimodular(self.S):
            return False
        return (self.S.star_transpose() @ A) @ self.S == self.B


class Reduction:
    """Accumulates congruence moves: S tracks the product, B = S* A0 S.

    Elementary moves update only the touched rows/columns instead of doing
    full matrix products."""

    __slots__ = ("A0", "S", "B")

    def __init__(self, A: PolyMatrix):
        self.A0 = A
        self.S = PolyMatrix.identity(A.tower, A.rows)
        self.B = A

    def apply(self, M: PolyMatrix) -> None:
        self.S = self.S @ M
        self.B = (M.star_transpose() @ self.B) @ M

    def transvection(self, i: int, j: int, x: StarPoly) -> None:
        """col_j += x * col_i, mirrored on rows (M = I + x E_ij)."""
        if x.is_zero():
            return
        T = self.B.tower
        n = self.B.rows
        xs = x.star()
        B = [list(row) for row in self.B.entries]
        for k in range(n):
            if B[k][i].coeffs:
                B[k][j] = B[k][j] + x * B[k][i]
        for k in range(n):
            if B[i][k].coeffs:
                B[j][k] = B[j][k] + xs * B[i][k]
        self.B = PolyMatrix(T, B)
        S = [list(row) for row in self.S.entries]
        for k in range(n):
            if S[k][i].coeffs:
                S[k][j] = S[k][j] + x * S[k][i]
        self.S = PolyMatrix(T, S)

    def scale_col(self, i: int, c: StarPoly) -> None:
        T = self.B.tower
        n = self.B.rows
        cs = c.star()
        B = [list(row) for row in self.B.entries]
        for k in range(n):
            B[k][i] = B[k][i] * c
        for k in range(n):
            B[i][k] = B[i][k] * cs
        self.B = PolyMatrix(T, B)
        S = [list(row) for row in self.S.entries]
        for k in range(n):
            S[k][i] = S[k][i] * c
        self.S = PolyMatrix(T, S)

    def permute(self, perm: Sequence[int]) -> None:
        """Columns reordered so new col k = old col perm[k]."""
        T = self.B.tower
        n = self.B.rows
        self.B = PolyMatrix(T, [[self.B.entries[perm[i]][perm[j]]
                                 for j in range(n)] for i in range(n)])
        self.S = PolyMatrix(T, [[self.S.entries[i][perm[j]]
                                 for j in range(n)] for i in range(n)])

    def embed(self, S_small: PolyMatrix, offset: int) -> None:
        """Apply I (+) S_small (+) I acting on the coordinate window."""
        T = self.B.tower
        n = self.B.rows
        k = S_small.rows
        win = range(offset, offset + k)
        B = [list(row) for row in self.B.entries]
        for r in range(n):
            old = [B[r][offset + c] for c in range(k)]
            for c in range(k):
                acc = StarPoly.zero(T)
                for m in range(k):
                    if old[m].coeffs and S_small.entries[m][c].coeffs:
                        acc = acc + old[m] * S_small.entries[m][c]
                B[r][offset + c] = acc
        Sst = S_small.star_transpose()
        for col in range(n):
            old = [B[offset + r][col] for r in range(k)]
            for r in range(k):
                acc = StarPoly.zero(T)
                for m in range(k):
                    if Sst.entries[r][m].coeffs and old[m].coeffs:
                        acc = acc + Sst.entries[r][m] * old[m]
                B[offset + r][col] = acc
        self.B = PolyMatrix(T, B)
        S = [list(row) for row in self.S.entries]
        for r in range(n):
            old = [S[r][offset + c] for c in range(k)]
            for c in range(k):
                acc = StarPoly.zero(T)
                for m in range(k):
                    if old[m].coeffs and S_small.entries[m][c].coeffs:
                        acc = acc + old[m] * S_small.entries[m][c]
                S[r][offset + c] = acc
        self.S = PolyMatrix(T, S)

    def certificate(self) -> Certificate:
        return Certificate(self.S, self.B)


# ---------------- unimodular completion and splitting ----------------

def vector_gcd(v: Sequence[StarPoly]) -> StarPoly:
    g = StarPoly.zero(v[0].tower)
    for e in v:
        if not e.is_zero():
            g = poly_gcd(g, e) if not g.is_zero() else e.monic()
        if g.is_one():
            break
    return g


def unimodular_completion(v: Sequence[StarPoly]) -> PolyMatrix:
    """T invertible over R with T e1 = v, for primitive v (entry gcd 1)."""
    T = v[0].tower
    n = len(v)
    g = vector_gcd(list(v))
    if not g.is_one():
        raise ValueError("vector is not primitive")
    if n == 2:
        from .starpoly import gcd_bezout
        _, u1, u2 = gcd_bezout(v[0], v[1])
        return PolyMatrix(T, [[v[0], -u2], [v[1], u1]])
    w = list(v)
    out = PolyMatrix.identity(T, n)

    def apply_inverse(M_inv: PolyMatrix):
        nonlocal out
        out = out @ M_inv

    while True:
        nz = [i for i in range(n) if not w[i].is_zero()]
        piv = min(nz, key=lambda i: (w[i].degree(), i))
        done = True
        for j in range(n):
            if j == piv or w[j].is_zero():
                continue
            q = w[j] // w[piv]
            w[j] = w[j] - q * w[piv]
            # row op: row_j -= q row_piv; inverse adds it back
            M_inv = [list(r) for r in PolyMatrix.identity(T, n).entries]
            M_inv[j][piv] = q
            apply_inverse(PolyMatrix(T, M_inv))
            if not w[j].is_zero():
                done = False
        nz = [i for i in range(n) if not w[i].is_zero()]
        if len(nz) == 1:
            piv = nz[0]
            break
        if done:
            piv = min(nz, key=lambda i: (w[i].degree(), i))
    if piv != 0:
        w[0], w[piv] = w[piv], w[0]
        M_inv = [list(r) for r in PolyMatrix.identity(T, n).entries]
        M_inv[0][0] = M_inv[piv][piv] = StarPoly.zero(T)
        M_inv[0][piv] = M_inv[piv][0] = StarPoly.one(T)
        apply_inverse(PolyMatrix(T, M_inv))
    c = w[0]
    if c.degree() != 0:
        raise ValueError("vector is not primitive")
    # w[0] = c -> 1 by scaling; inverse scales back
    M_inv = [list(r) for r in PolyMatrix.identity(T, n).entries]
    M_inv[0][0] = c
    apply_inverse(PolyMatrix(T, M_inv))
    assert out.column(0) == list(v)
    return out


def kernel_split(A: PolyMatrix) -> Certificate:
    """Congruence to 0_{n-r} (+) A' with det A' != 0, via the Smith kernel."""
    T = A.tower
    n = A.rows
    sf = smith_form(A)
    r = sum(1 for f in sf.factors if not f.is_zero())
    if r == n:
        return Certificate(PolyMatrix.identity(T, n), A)
    cols = list(range(r, n)) + list(range(r))
    scols = [[sf.V.entries[i][cols[j]] for i in range(n)] for j in range(n)]
    # degree-reduce: kernel columns against each other, and complement
    # columns by kernel columns; both leave S* A S unchanged since the
    # kernel columns annihilate A on both sides
    k = n - r

    def total(col):
        return sum(max(e.degree(), 0) for e in col)

    for _ in range(4):
        changed = False
        for i in range(k):
            for j in range(n):
                if j == i:
                    continue
                for row in range(n):
                    a, b = scols[i][row], scols[j][row]
                    if a.is_zero() or b.is_zero() or b.degree() < a.degree():
                        continue
                    q = b // a
                    if q.is_zero():
                        continue
                    cand = [cj - q * ci for cj, ci in zip(scols[j], scols[i])]
                    if total(cand) < total(scols[j]):
                        scols[j] = cand
                        changed = True
        if not changed:
            break
    S = PolyMatrix(T, [[scols[j][i] for j in range(n)] for i in range(n)])
    B = (S.star_transpose() @ A) @ S
    for i in range(n):
        for j in range(n):
            if (i < n - r or j < n - r) and not B.entries[i][j].is_zero():
                raise AssertionError("kernel split failed to isolate the zero block")
    return Certificate(S, B)
