"""Canonical forms under congruence: which monic homogeneous divisibility
chains occur as invariant factors of an eps-form, assembly of the canonical
block matrix from a valid chain, the full canonicalizer, and the congruence
decision procedure.

Canonical blocks are 1x1 matrices (f) with f* = eps f and 2x2 matrices
[[0, q],[eps q*, 0]] with q = g p, p pure chosen canonically, so two
congruent inputs canonicalize to byte-identical block lists.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .starpoly import (EVEN, ODD, ZERO, StarPoly, canonical_pure_factor,
                       is_pure)
from .polymat import (HERMITIAN, SKEW, Certificate, PolyMatrix, Reduction,
                      determinant, form_kind, gcd_of_matrix, inverse,
                      invariant_factors, kernel_split, smith_form)
from .congruence import (ReductionError, block_swap, compress_form,
                         represent_one, sk_split, split_one)
from .tower import Tower


class Block1:
    """1x1 block (f), f = 0 or monic homogeneous with f* = eps f."""

    __slots__ = ("f",)

    def __init__(self, f: StarPoly):
        self.f = f

    def matrix(self) -> PolyMatrix:
        return PolyMatrix(self.f.tower, [[self.f]])

    def factors(self) -> List[StarPoly]:
        return [self.f]

    def __eq__(self, other):
        return isinstance(other, Block1) and self.f == other.f

    def __repr__(self):
        return f"1x1: {self.f}"


class Block2:
    """2x2 block [[0, g p],[eps (g p)*, 0]] with g monic and p pure."""

    __slots__ = ("g", "p", "eps")

    def __init__(self, g: StarPoly, p: StarPoly, eps: int):
        self.g = g
        self.p = p
        self.eps = eps

    def matrix(self) -> PolyMatrix:
        T = self.g.tower
        q = self.g * self.p
        qs = q.star() if self.eps == HERMITIAN else -q.star()
        z = StarPoly.zero(T)
        return PolyMatrix(T, [[z, q], [qs, z]])

    def factors(self) -> List[StarPoly]:
        return [self.g, (self.g * self.p * self.p.star()).monic()]

    def __eq__(self, other):
        return (isinstance(other, Block2) and self.g == other.g
                and self.p == other.p and self.eps == other.eps)

    def __repr__(self):
        return f"2x2: {self.g} | {self.p}"


class CanonicalBlocks:
    """Ordered block list; zero blocks last, the rest in chain order."""

    __slots__ = ("eps", "blocks")

    def __init__(self, eps: int, blocks: Sequence):
        self.eps = eps
        self.blocks = list(blocks)

    def matrix(self) -> Optional[PolyMatrix]:
        mats = [b.matrix() for b in self.blocks]
        if not mats:
            return None
        return PolyMatrix.block_diag(mats[0].tower, mats)

    def factor_sequence(self) -> "FactorSequence":
        fs: List[StarPoly] = []
        for b in self.blocks:
            fs.extend(b.factors())
        tower = fs[0].tower if fs else None
        nz = [f for f in fs if not f.is_zero()]
        zs = [f for f in fs if f.is_zero()]
        return FactorSequence(tower, self.eps, nz + zs)

    def serialize(self, tower: Tower) -> str:
        lines = [f"p = {tower.p}",
                 f"epsilon = {'+1' if self.eps == HERMITIAN else '-1'}",
                 f"n = {sum(2 if isinstance(b, Block2) else 1 for b in self.blocks)}"]
        for line in tower.describe_levels():
            lines.append(f"generator {line}")
        for b in self.blocks:
            if isinstance(b, Block2):
                lines.append(f"2x2: {b.g} | {b.p}")
            else:
                lines.append(f"1x1: {b.f}")
        return "\n".join(lines)

    def __eq__(self, other):
        return (isinstance(other, CanonicalBlocks) and self.eps == other.eps
                and self.blocks == other.blocks)

    def __repr__(self):
        return "; ".join(repr(b) for b in self.blocks) or "(empty)"


class FactorSequence:
    """f_1 | f_2 | ... | f_r monic homogeneous, then zeros, tagged with eps."""

    __slots__ = ("tower", "eps", "entries")

    def __init__(self, tower: Tower, eps: int, entries: Sequence[StarPoly]):
        self.tower = tower
        self.eps = eps
        self.entries = tuple(entries)

    def __eq__(self, other):
        return (isinstance(other, FactorSequence) and self.eps == other.eps
                and self.entries == other.entries)

    def __repr__(self):
        return f"eps={self.eps}: " + ", ".join(str(f) for f in self.entries)


class ValidationResult:
    __slots__ = ("ok", "reason", "pairs")

    def __init__(self, ok: bool, reason: str = "",
                 pairs: Optional[List[Tuple[int, StarPoly]]] = None):
        self.ok = ok
        self.reason = reason
        self.pairs = pairs if pairs is not None else []

    def __bool__(self):
        return self.ok


def factor_sequence_of(A: PolyMatrix, eps: int) -> FactorSequence:
    return FactorSequence(A.tower, eps, invariant_factors(A))


def _check_structure(fs: FactorSequence) -> int:
    """Raise on malformed sequences; return the rank (nonzero prefix length)."""
    entries = fs.entries
    r = 0
    for f in entries:
        if f.is_zero():
            break
        r += 1
    for f in entries[r:]:
        if not f.is_zero():
            raise ValueError("zero entries must come last")
    for f in entries[:r]:
        if not f.lc().is_one():
            raise ValueError("nonzero invariant factors must be monic")
        if not f.is_homogeneous():
            raise ValueError("invariant factors of an eps-form are homogeneous")
    for a, b in zip(entries[:r], entries[1:r]):
        if not a.divides(b):
            raise ValueError("divisibility chain violated")
    return r


def validate_sequence(fs: FactorSequence) -> ValidationResult:
    """Decide whether the chain occurs as the invariant factors of an
    eps-form: wrong-parity runs pair up with even length, and each paired
    quotient is a norm of a pure element (even with nonzero constant term).
    Returns the pairing with canonical p witnesses when valid."""
    r = _check_structure(fs)
    wrong = ODD if fs.eps == HERMITIAN else EVEN
    entries = fs.entries
    pairs: List[Tuple[int, StarPoly]] = []
    i = 0
    while i < r:
        if entries[i].parity() != wrong:
            i += 1
            continue
        j = i
        while j < r and entries[j].parity() == wrong:
            j += 1
        if (j - i) % 2 != 0:
            return ValidationResult(
                False, f"wrong-parity run of odd length at positions {i}..{j - 1}")
        for k in range(i, j, 2):
            q = entries[k + 1].exact_div(entries[k])
            if q.eval(fs.tower.zero).is_zero():
                return ValidationResult(
                    False, f"paired quotient at position {k} is divisible by t")
            p = canonical_pure_factor(q.monic())
            pairs.append((k, p))
        i = j
    return ValidationResult(True, "", pairs)


def assemble_canonical(fs: FactorSequence) -> Tuple[CanonicalBlocks, PolyMatrix]:
    """The canonical block matrix whose invariant factors reproduce fs."""
    res = validate_sequence(fs)
    if not res.ok:
        raise ValueError(f"invalid factor sequence: {res.reason}")
    paired = {k: p for k, p in res.pairs}
    blocks: List = []
    i = 0
    entries = fs.entries
    while i < len(entries):
        if i in paired:
            blocks.append(Block2(entries[i], paired[i], fs.eps))
            i += 2
        else:
            blocks.append(Block1(entries[i]))
            i += 1
    cb = CanonicalBlocks(fs.eps, blocks)
    M = cb.matrix()
    if M is None:
        M = PolyMatrix.zeros(fs.tower, 0, 0)
    return cb, M


# ---------------------------------------------------------------------------
# canonicalization
# ---------------------------------------------------------------------------

def _core(A: PolyMatrix, eps: int) -> Tuple[PolyMatrix, PolyMatrix, List]:
    """(S, B, blocks) for nonsingular A with A* = eps A: S* A S = B with B the
    ordered direct sum of canonical blocks."""
    T = A.tower
    n = A.rows
    if n == 0:
        return PolyMatrix.identity(T, 0), A, []
    d, par = gcd_of_matrix(A)
    A2 = A.exact_div(d)
    eps2 = eps if par == EVEN else -eps
    if n == 1:
        c = A2.entries[0][0].constant_value()
        s = StarPoly.const(T, T.inv(T.sqrt(c)))
        S = PolyMatrix(T, [[s]])
        B = PolyMatrix(T, [[d]])
        return S, B, [Block1(d)]
    if eps2 == HERMITIAN:
        v = represent_one(A2)
        cert1 = split_one(A2, v)
        M1 = (cert1.S.star_transpose() @ A) @ cert1.S
        sub = M1.submatrix(range(1, n), range(1, n))
        comp = compress_form(sub)
        S_sub, B_sub, blocks_sub = _core(comp.B, eps)
        S = cert1.S @ PolyMatrix.block_diag(
            T, [PolyMatrix.identity(T, 1), comp.S @ S_sub])
        B = PolyMatrix.block_diag(T, [PolyMatrix(T, [[d]]), B_sub])
        return S, B, [Block1(d)] + blocks_sub
    res = sk_split(A2)
    p = canonical_pure_factor((res.f * res.f.star()).monic())
    sw = block_swap(res.f, p)
    M1 = (res.cert.S.star_transpose() @ A) @ res.cert.S
    sub = M1.submatrix(range(2, n), range(2, n))
    comp = compress_form(sub)
    S_sub, B_sub, blocks_sub = _core(comp.B, eps)
    S = res.cert.S @ PolyMatrix.block_diag(T, [sw.S, comp.S @ S_sub])
    blk = Block2(d, p, eps)
    B = PolyMatrix.block_diag(T, [blk.matrix(), B_sub])
    return S, B, [blk] + blocks_sub


def canonicalize(A: PolyMatrix, eps: int) -> Tuple[Certificate, CanonicalBlocks]:
    """Verified congruence S* A S = B with B the canonical direct sum of 1x1
    blocks and zero-diagonal 2x2 blocks (zero blocks last)."""
    T = A.tower
    n = A.rows
    kind = form_kind(A)
    if kind is None or (not A.is_zero() and kind != eps):
        raise ValueError("matrix is not an eps-form of the stated kind")
    ks = kernel_split(A)
    k = 0
    while k < n and all(ks.B.entries[k][j].is_zero() for j in range(n)):
        k += 1
    if n - k != sum(1 for f in invariant_factors(A) if not f.is_zero()):
        raise AssertionError("kernel split rank mismatch")
    core = ks.B.submatrix(range(k, n), range(k, n))
    S_core, B_core, blocks = _core(core, eps)
    red = Reduction(A)
    red.apply(ks.S)
    red.apply(PolyMatrix.block_diag(T, [PolyMatrix.identity(T, k), S_core]))
    if k:
        perm = list(range(k, n)) + list(range(k))
        red.permute(perm)
        blocks = blocks + [Block1(StarPoly.zero(T))] * k
    cb = CanonicalBlocks(eps, blocks)
    expected = cb.matrix()
    if expected is None:
        expected = PolyMatrix.zeros(T, 0, 0)
    assert red.B == expected, "canonical assembly mismatch"
    cert = red.certificate()
    assert cert.verify(A)
    return cert, cb


def are_congruent(A: PolyMatrix, A2: PolyMatrix, eps: int,
                  want_certificate: bool = False
                  ) -> Tuple[bool, Optional[Certificate]]:
    """Congruence decision via invariant factors; optionally a verified
    certificate composed through the shared canonical form."""
    if A.rows != A2.rows or A.cols != A2.cols:
        raise ValueError("size mismatch")
    for M in (A, A2):
        kind = form_kind(M)
        if kind is None or (not M.is_zero() and kind != eps):
            raise ValueError("inputs are not eps-forms of the stated kind")
    same = invariant_factors(A) == invariant_factors(A2)
    if not same or not want_certificate:
        return same, None
    cert1, cb1 = canonicalize(A, eps)
    cert2, cb2 = canonicalize(A2, eps)
    assert cb1 == cb2, "canonical forms of equivalent matrices differ"
    S = cert1.S @ inverse(cert2.S)
    cert = Certificate(S, A2)
    assert cert.verify(A)
    return True, cert
