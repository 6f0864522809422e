"""Batch front end: parse problem files, dispatch commands, emit canonical
forms and certificates, generate random instances, run self-test oracles.

Problem file format (line oriented, diffable):

    p = 5
    epsilon = -1
    n = 2
    A = [ [ 0, t ], [ t, t^3 ] ]

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional, Tuple

from .tower import Tower
from .starpoly import StarPoly, format_poly, parse_poly
from .polymat import (HERMITIAN, SKEW, Certificate, PolyMatrix, determinant,
                      form_kind, invariant_factors, is_unimodular)
from .canonical import CanonicalBlocks, canonicalize, are_congruent
from .randgen import RandomSpec, generate


class InputError(Exception):
    pass


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_problem(text: str) -> Tuple[Tower, Optional[int], PolyMatrix, dict]:
    """Parse a problem file; returns (tower, epsilon or None, matrix, extras).

    Any additional matrix sections (S = ..., B = ...) land in extras.
    """
    fields = {}
    matrices = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = _strip_comment(lines[i])
        i += 1
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"unparseable line: {line!r}")
        key, value = line.split("=", 1)
        key = key.strip().lower()
        value = value.strip()
        if key in ("p", "n"):
            fields[key] = int(value)
        elif key == "epsilon":
            if value in ("+1", "1", "+"):
                fields[key] = HERMITIAN
            elif value in ("-1", "-"):
                fields[key] = SKEW
            else:
                raise InputError(f"bad epsilon: {value!r}")
        elif key in ("a", "s", "b"):
            while value.count("[") != value.count("]") or not value.endswith("]"):
                if i >= len(lines):
                    raise InputError(f"unterminated matrix for {key!r}")
                value += " " + _strip_comment(lines[i])
                i += 1
            matrices[key.upper()] = value
        else:
            raise InputError(f"unknown key: {key!r}")
    if "p" not in fields:
        raise InputError("missing p")
    if "A" not in matrices:
        raise InputError("missing matrix A")
    tower = Tower(fields["p"])
    parsed = {name: _parse_matrix(raw, tower) for name, raw in matrices.items()}
    A = parsed["A"]
    if "n" in fields and A.rows != fields["n"]:
        raise InputError(f"declared n = {fields['n']} but A has {A.rows} rows")
    eps = fields.get("epsilon")
    if eps is not None and not A.is_zero() and form_kind(A) != eps:
        raise InputError("matrix does not match the declared epsilon")
    extras = {k: v for k, v in parsed.items() if k != "A"}
    return tower, eps, A, extras


def _parse_matrix(text: str, tower: Tower) -> PolyMatrix:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise InputError("matrix must be bracketed")
    body = text[1:-1].strip()
    rows = []
    depth = 0
    current = ""
    for ch in body:
        if ch == "[":
            depth += 1
            if depth == 1:
                current = ""
                continue
        elif ch == "]":
            depth -= 1
            if depth == 0:
                rows.append(current)
                continue
        if depth >= 1:
            current += ch
    if depth != 0:
        raise InputError("unbalanced brackets in matrix")
    out = []
    for row in rows:
        entries = [e.strip() for e in row.split(",")]
        try:
            out.append([parse_poly(e, tower) for e in entries])
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if not out:
        raise InputError("empty matrix")
    return PolyMatrix(tower, out)


def format_matrix(A: PolyMatrix) -> str:
    return "[ " + ", ".join(
        "[ " + ", ".join(format_poly(e) for e in row) + " ]"
        for row in A.entries) + " ]"


def format_problem(tower: Tower, eps: Optional[int], A: PolyMatrix,
                   extras: Optional[dict] = None) -> str:
    lines = [f"p = {tower.p}"]
    if eps is not None:
        lines.append(f"epsilon = {'+1' if eps == HERMITIAN else '-1'}")
    lines.append(f"n = {A.rows}")
    for line in tower.describe_levels():
        lines.append(f"# generator {line}")
    lines.append(f"A = {format_matrix(A)}")
    for name, M in (extras or {}).items():
        lines.append(f"{name} = {format_matrix(M)}")
    return "\n".join(lines) + "\n"


def _detect_eps(A: PolyMatrix, declared: Optional[int]) -> int:
    if declared is not None:
        return declared
    kind = form_kind(A)
    if kind is None:
        raise InputError("matrix is neither hermitian nor skew-hermitian")
    return kind


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_invariants(args) -> int:
    tower, eps, A, _ = parse_problem(open(args.file).read())
    factors = invariant_factors(A)
    parts = []
    for f in factors:
        if f.is_zero():
            parts.append("0")
        else:
            parts.append(f"{format_poly(f)} ({f.parity()})")
    print(", ".join(parts))
    return 0


def cmd_canonical(args) -> int:
    tower, eps, A, _ = parse_problem(open(args.file).read())
    eps = _detect_eps(A, eps)
    cert, blocks = canonicalize(A, eps)
    if args.trace:
        print(f"# moves folded into S; det S = {format_poly(determinant(cert.S))}",
              file=sys.stderr)
    print(blocks.serialize(tower))
    if args.certificate_out:
        with open(args.certificate_out, "w") as fh:
            fh.write(format_problem(tower, eps, A,
                                    {"S": cert.S, "B": cert.B}))
    if not cert.verify(A):
        print("certificate verification FAILED", file=sys.stderr)
        return 1
    return 0


def cmd_congruent(args) -> int:
    tower1, eps1, A, _ = parse_problem(open(args.file_a).read())
    tower2, eps2, B, _ = parse_problem(open(args.file_b).read())
    if tower1.p != tower2.p:
        raise InputError("matrices live over different primes")
    if A.rows != B.rows:
        print("no")
        return 0
    # reparse B over the first tower so both share arithmetic
    B = PolyMatrix(tower1, [[parse_poly(format_poly(e), tower1) for e in row]
                            for row in B.entries])
    kind_a = form_kind(A) if not A.is_zero() else (eps1 or HERMITIAN)
    kind_b = form_kind(B) if not B.is_zero() else (eps2 or HERMITIAN)
    if kind_a is None or kind_b is None or kind_a != kind_b:
        print("no")
        return 0
    same, cert = are_congruent(A, B, kind_a,
                               want_certificate=bool(args.certificate_out))
    print("yes" if same else "no")
    if same and args.certificate_out:
        with open(args.certificate_out, "w") as fh:
            fh.write(format_problem(tower1, kind_a, A,
                                    {"S": cert.S, "B": cert.B}))
        if not cert.verify(A):
            return 1
    return 0


def cmd_verify(args) -> int:
    tower, eps, A, _ = parse_problem(open(args.file_a).read())
    _, _, S, _ = parse_problem(open(args.file_s).read())
    _, _, B, _ = parse_problem(open(args.file_b).read())
    S = PolyMatrix(tower, [[parse_poly(format_poly(e), tower) for e in row]
                           for row in S.entries])
    B = PolyMatrix(tower, [[parse_poly(format_poly(e), tower) for e in row]
                           for row in B.entries])
    if not is_unimodular(S):
        print("fail: not unimodular")
        return 1
    got = (S.star_transpose() @ A) @ S
    for i in range(got.rows):
        for j in range(got.cols):
            if got.entries[i][j] != B.entries[i][j]:
                print(f"fail: entry ({i+1},{j+1}): "
                      f"{format_poly(got.entries[i][j])} != "
                      f"{format_poly(B.entries[i][j])}")
                return 1
    print("pass")
    return 0


def cmd_random(args) -> int:
    count = args.count
    for k in range(count):
        spec = RandomSpec(seed=args.seed + k, p=args.p, n=args.n,
                          eps=SKEW if args.epsilon == "-1" else HERMITIAN,
                          max_degree=args.degree, moves=args.moves)
        inst = generate(spec)
        text = format_problem(inst.tower, spec.eps, inst.A)
        if args.out:
            path = f"{args.out}/inst_{k:04d}.prob"
            with open(path, "w") as fh:
                fh.write(text)
            canon = inst.blocks.serialize(inst.tower)
            with open(f"{args.out}/inst_{k:04d}.canon", "w") as fh:
                fh.write(canon + "\n")
            print(path)
        else:
            sys.stdout.write(text)
    return 0


def cmd_selftest(args) -> int:
    import random as _random
    from .starpoly import gcd_bezout, is_pure, norm_factor, solve_norm_equation
    from .polymat import Reduction, smith_form
    from .canonical import invariant_factors as invf

    budget = args.budget_seconds
    rng = _random.Random(args.seed)
    t0 = time.time()
    report = []

    def timed_out():
        return time.time() - t0 > budget

    def rand_poly(tower, maxdeg):
        return StarPoly.from_ints(
            tower, [rng.randrange(tower.p) for _ in range(rng.randint(1, maxdeg + 1))])

    # star automorphism laws
    n_star = 0
    T = Tower(5)
    while n_star < 2000 and not timed_out():
        a, b = rand_poly(T, 6), rand_poly(T, 6)
        assert (a * b).star() == a.star() * b.star()
        assert (a + b).star() == a.star() + b.star()
        assert a.star().star() == a
        n_star += 1
    report.append(f"star automorphism: {n_star} samples ok")

    # norm equations
    n_norm = 0
    while n_norm < 500 and not timed_out():
        a = rand_poly(T, 4)
        if a.is_zero() or not is_pure(a):
            continue
        b = rand_poly(T, 5)
        be, bo = b.even_part(), b.odd_part()
        if not be.is_zero():
            x = solve_norm_equation(a, be, "+")
            assert a * x + a.star() * x.star() == be
        if not bo.is_zero():
            x = solve_norm_equation(a, bo, "-")
            assert a * x - a.star() * x.star() == bo
        n_norm += 1
    report.append(f"norm equations: {n_norm} samples ok")

    # norm factorization
    n_fac = 0
    while n_fac < 200 and not timed_out():
        z = rand_poly(T, 4)
        if z.is_zero():
            continue
        y = z * z.star()
        w = norm_factor(y)
        assert w * w.star() == y
        n_fac += 1
    report.append(f"norm factorization: {n_fac} samples ok")

    # Smith round trip + canonicalization on random instances
    n_smith = 0
    while n_smith < 60 and not timed_out():
        p = rng.choice([3, 5])
        n = rng.randint(1, 4)
        Ti = Tower(p)
        A = PolyMatrix(Ti, [[rand_poly(Ti, 3) for _ in range(n)]
                            for _ in range(n)])
        sf = smith_form(A)
        assert (sf.U @ A) @ sf.V == sf.D
        n_smith += 1
    report.append(f"smith round-trip: {n_smith} samples ok")

    n_canon = 0
    while n_canon < 20 and not timed_out():
        spec = RandomSpec(seed=rng.randrange(1 << 30), p=rng.choice([3, 5]),
                          n=rng.randint(2, 4), eps=rng.choice([HERMITIAN, SKEW]),
                          max_degree=4, moves=5)
        inst = generate(spec)
        cert, blocks = canonicalize(inst.A, spec.eps)
        assert cert.verify(inst.A)
        assert invf(cert.B) == invf(inst.C)
        n_canon += 1
    report.append(f"canonicalize round-trip: {n_canon} instances ok")

    for line in report:
        print(line)
    print(f"selftest passed in {time.time() - t0:.1f}s (budget {budget}s)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="starform",
        description="exact congruence canonical forms for hermitian and "
                    "skew-hermitian matrices over F[t], t -> -t")
    sub = ap.add_subparsers(dest="command", required=True)

    p_inv = sub.add_parser("invariants", help="print invariant factors")
    p_inv.add_argument("file")
    p_inv.set_defaults(func=cmd_invariants)

    p_can = sub.add_parser("canonical", help="canonicalize under congruence")
    p_can.add_argument("file")
    p_can.add_argument("--certificate-out")
    p_can.add_argument("--trace", action="store_true")
    p_can.set_defaults(func=cmd_canonical)

    p_con = sub.add_parser("congruent", help="decide congruence of two matrices")
    p_con.add_argument("file_a")
    p_con.add_argument("file_b")
    p_con.add_argument("--certificate-out")
    p_con.set_defaults(func=cmd_congruent)

    p_ver = sub.add_parser("verify", help="check S* A S = B exactly")
    p_ver.add_argument("file_a")
    p_ver.add_argument("file_s")
    p_ver.add_argument("file_b")
    p_ver.set_defaults(func=cmd_verify)

    p_rnd = sub.add_parser("random", help="generate test instances")
    p_rnd.add_argument("--seed", type=int, default=0)
    p_rnd.add_argument("--p", type=int, default=5)
    p_rnd.add_argument("--n", type=int, default=3)
    p_rnd.add_argument("--epsilon", choices=["+1", "-1"], default="+1")
    p_rnd.add_argument("--degree", type=int, default=4)
    p_rnd.add_argument("--moves", type=int, default=6)
    p_rnd.add_argument("--count", type=int, default=1)
    p_rnd.add_argument("--out")
    p_rnd.set_defaults(func=cmd_random)

    p_self = sub.add_parser("selftest", help="run the oracle suites")
    p_self.add_argument("--budget-seconds", type=float, default=60.0)
    p_self.add_argument("--seed", type=int, default=0)
    p_self.set_defaults(func=cmd_selftest)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
