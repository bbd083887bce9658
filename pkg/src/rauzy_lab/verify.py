"""Brute-force and numerical checks around the Perron-Frobenius argument.

Everything exact lives on integer matrices; floats appear only in
:func:`perron` and :func:`pf_pairing_check`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterator, Sequence

import numpy as np

from .exact import Matrix, identity, kernel, matmul, matvec, nullspace, rank, transpose
from .iet import StepKind, elementary_matrix, is_positive, permutation_step
from .permutations import (
    Permutation,
    b_vector,
    irreducible_permutations,
    is_irreducible,
    l_matrix,
    nullspace_basis_from_sigma,
    sigma_partition,
)
from .recovery import RealizationPath, peel_decompose

__all__ = [
    "MAX_CYCLE_LENGTH",
    "CycleEnumeration",
    "CycleAction",
    "SpectralReport",
    "PairingResult",
    "MainLemmaReport",
    "enumerate_cycles",
    "cycle_products",
    "cycle_b_action",
    "b_action",
    "StepAction",
    "veech_action",
    "signed_b_image",
    "sign_definite_row",
    "positive_vector_exclusion",
    "perron",
    "pf_pairing_check",
    "main_lemma_check",
    "run_suite",
]

MAX_CYCLE_LENGTH = 12

_SIDES = {
    "right-only": (StepKind.R0, StepKind.R1),
    "right": (StepKind.R0, StepKind.R1),
    "extended": tuple(StepKind),
}


def _kinds(sides: str) -> tuple:
    try:
        return _SIDES[sides]
    except KeyError:
        raise ValueError(f"sides must be 'right-only' or 'extended', not {sides!r}") from None


# ---------------------------------------------------------------------------
# cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycleEnumeration:
    base: Permutation
    max_len: int
    sides: str
    cycles: tuple

    def __len__(self):
        return len(self.cycles)


@lru_cache(maxsize=None)
def _column_sources(pi: Permutation, kind: StepKind) -> tuple:
    # column j of B @ A is the sum of the columns i of B with A[i][j] == 1
    A = elementary_matrix(pi, kind)
    n = pi.n
    return tuple(tuple(i for i in range(n) if A[i][j]) for j in range(n))


def _times_elementary(cols: tuple, pi: Permutation, kind: StepKind) -> tuple:
    out = []
    for src in _column_sources(pi, kind):
        if len(src) == 1:
            out.append(cols[src[0]])
        else:
            out.append(tuple(map(sum, zip(*(cols[i] for i in src)))))
    return tuple(out)


def _walks(pi: Permutation, max_len: int, kinds: tuple) -> Iterator[tuple]:
    """Depth-first walks from ``pi``: yields ``(kinds, end, columns of product)``."""
    n = pi.n
    start = tuple(zip(*identity(n)))
    stack = [((), pi, start)]
    while stack:
        path, cur, cols = stack.pop()
        if path:
            yield path, cur, cols
        if len(path) == max_len:
            continue
        for kind in reversed(kinds):
            stack.append((path + (kind,), permutation_step(cur, kind), _times_elementary(cols, cur, kind)))


def cycle_products(pi: Permutation, max_len: int, sides: str = "extended") -> Iterator[tuple]:
    """Yield ``(kinds, B)`` for every cycle at ``pi`` of length ``1..max_len``."""
    if not is_irreducible(pi):
        raise ValueError(f"{pi} is reducible")
    for path, end, cols in _walks(pi, max_len, _kinds(sides)):
        if end == pi:
            yield path, tuple(zip(*cols))


def enumerate_cycles(pi: Permutation, max_len: int, sides: str = "right-only") -> CycleEnumeration:
    """All step sequences of length at most ``max_len`` whose walk returns to ``pi``."""
    if max_len > MAX_CYCLE_LENGTH:
        raise ValueError(f"max_len {max_len} exceeds the bound {MAX_CYCLE_LENGTH}")
    if not is_irreducible(pi):
        raise ValueError(f"{pi} is reducible")
    cycles = []
    for path, end, _ in _walks(pi, max(max_len, 0), _kinds(sides)):
        if end == pi:
            cycles.append(RealizationPath(pi, path, pi))
    cycles.sort(key=lambda c: (len(c), [list(StepKind).index(k) for k in c.kinds]))
    return CycleEnumeration(pi, max_len, sides, tuple(cycles))


@dataclass(frozen=True)
class CycleAction:
    blocks: tuple
    bijection: tuple  # block index -> block index
    signs: tuple  # B b_S = sign * b_{d S}
    period: int


def _signed_lookup(blocks, n) -> dict:
    table = {}
    for idx, S in enumerate(blocks):
        b = b_vector(S, n)
        table.setdefault(b, (idx, 1))
    for idx, S in enumerate(blocks):
        b = tuple(-x for x in b_vector(S, n))
        table.setdefault(b, (idx, -1))
    return table


def signed_b_image(A: Matrix, src: Permutation, dst: Permutation) -> tuple:
    """Match ``A b_S`` (``S`` in Sigma(src)) against the signed ``b`` vectors of Sigma(dst)."""
    src_blocks, dst_blocks = sigma_partition(src), sigma_partition(dst)
    table = _signed_lookup(dst_blocks, dst.n)
    out = []
    for S in src_blocks:
        img = matvec(A, b_vector(S, src.n))
        if img not in table:
            raise AssertionError(f"A b_S = {img} is not a signed b-vector of {dst}")
        out.append(table[img])
    return tuple(out)


@dataclass(frozen=True)
class StepAction:
    pre: Permutation
    post: Permutation
    kind: StepKind
    matches: tuple  # block of Sigma(post) -> (block index in Sigma(pre), sign)


def veech_action(pi: Permutation, kind: StepKind) -> StepAction:
    """How one elementary matrix ties the ``b_S`` of ``pi`` to those of its successor.

    With ``lambda = A lambda'``, ``A`` sends each ``b_{S'}`` of the successor to
    a signed ``b_S`` of ``pi`` and the induced map of blocks is a bijection;
    equivalently ``A^{-1}`` carries the ``b_S`` of ``pi`` forward.
    """
    post = permutation_step(pi, kind)
    A = elementary_matrix(pi, kind)
    matches = signed_b_image(A, post, pi)
    if sorted(m[0] for m in matches) != list(range(len(sigma_partition(pi)))):
        raise AssertionError(f"{kind.name} at {pi}: blocks are not matched bijectively")
    return StepAction(pi, post, kind, matches)


def cycle_b_action(path: RealizationPath) -> CycleAction:
    """Block bijection and period of a cycle product acting on the ``b_S``."""
    if path.base != path.end:
        raise ValueError("path is not a cycle")
    return b_action(path.base, path.product())


def b_action(pi: Permutation, B: Matrix) -> CycleAction:
    """Same as :func:`cycle_b_action` for a product matrix ``B`` of a cycle at ``pi``."""
    blocks = sigma_partition(pi)
    matches = signed_b_image(B, pi, pi)
    d = tuple(m[0] for m in matches)
    signs = tuple(m[1] for m in matches)
    if sorted(d) != list(range(len(blocks))):
        # b_S and -b_{S'} coincide when there are exactly two blocks
        d = tuple(range(len(blocks)))
        signs = tuple(1 if matvec(B, b_vector(S, pi.n)) == b_vector(S, pi.n) else -1 for S in blocks)
    period, seen = 1, set()
    for start in range(len(blocks)):
        if start in seen:
            continue
        length, sgn, i = 0, 1, start
        while True:
            seen.add(i)
            sgn *= signs[i]
            i = d[i]
            length += 1
            if i == start:
                break
        period = lcm(period, length * (2 if sgn < 0 else 1))
    Bp = identity(pi.n)
    for _ in range(period):
        Bp = matmul(Bp, B)
    for S in blocks:
        b = b_vector(S, pi.n)
        if matvec(Bp, b) != b:
            raise AssertionError(f"B^{period} b_S != b_S for S = {S}")
    return CycleAction(blocks, d, signs, period)


# ---------------------------------------------------------------------------
# sign-definite rows and the positive-vector exclusion
# ---------------------------------------------------------------------------

def _combo(pi: Permutation, other: Permutation, c) -> Matrix:
    L1, L2 = l_matrix(pi), l_matrix(other)
    return tuple(tuple(x - c * y for x, y in zip(r1, r2)) for r1, r2 in zip(L1, L2))


def sign_definite_row(pi: Permutation, other: Permutation, c) -> tuple[int, int]:
    """A non-zero row of ``L_pi - c L_other`` whose entries share one sign.

    Returns the 1-based row index and ``+1`` (non-negative) or ``-1``
    (non-positive).
    """
    if pi == other:
        raise ValueError("permutations must be distinct")
    if pi.n != other.n or not (is_irreducible(pi) and is_irreducible(other)):
        raise ValueError("need two irreducible permutations of the same size")
    c = Fraction(c)
    n = pi.n
    if c <= 0:
        i, s = 1, 1
    elif c < 1:
        i, s = pi.index_of(n), 1
    elif c == 1:
        i = max((k for k in range(1, n + 1) if pi(k) != other(k)), key=pi)
        s = 1
    else:
        i, s = sign_definite_row(other, pi, 1 / c)
        s = -s
    row = _combo(pi, other, c)[i - 1]
    if not any(row) or any(s * x < 0 for x in row):
        raise AssertionError(f"row {i} of L_pi - {c} L_pi' is {row}")
    return i, s


@dataclass(frozen=True)
class ExclusionWitness:
    passed: bool
    l_v: tuple
    other_l_v: tuple | None
    rank: int


def positive_vector_exclusion(pi: Permutation, other: Permutation | None, v: Sequence) -> ExclusionWitness:
    """Check that no scalar ``c`` puts ``v`` in the nullspace of ``L_pi - c L_other``.

    With ``other=None`` only ``c = 0`` is checked.  For real or complex
    ``c`` this is equivalent to ``L_pi v != 0`` and the two columns
    ``L_pi v``, ``L_other v`` being independent.
    """
    v = tuple(Fraction(x) for x in v)
    if any(x <= 0 for x in v):
        raise ValueError("v must be entrywise positive")
    if other is not None and other == pi:
        raise ValueError("permutations must be distinct")
    lv = matvec(l_matrix(pi), v)
    if other is None:
        return ExclusionWitness(any(lv), lv, None, int(any(lv)))
    ov = matvec(l_matrix(other), v)
    r = rank(tuple(zip(lv, ov)))
    return ExclusionWitness(any(lv) and r == 2, lv, ov, r)


# ---------------------------------------------------------------------------
# floating-point layer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralReport:
    matrix: Matrix
    alpha: float
    u: np.ndarray = field(repr=False)
    residual: float
    iterations: int


def perron(B: Matrix, tol: float = 1e-12, max_iter: int = 100_000) -> SpectralReport:
    """Perron-Frobenius eigenpair of a positive matrix by power iteration."""
    if not B or not is_positive(B):
        raise ValueError("perron needs an entrywise positive matrix")
    M = np.array(B, dtype=float)
    u = np.full(len(B), 1.0 / len(B))
    alpha, residual = 0.0, np.inf
    for it in range(1, max_iter + 1):
        w = M @ u
        alpha = w.sum()
        u_next = w / alpha
        residual = float(np.max(np.abs(M @ u_next - alpha * u_next)) / alpha)
        u = u_next
        if residual <= tol:
            break
    else:
        raise RuntimeError(f"power iteration did not converge (residual {residual:.3e})")
    if not np.all(u > 0):
        raise AssertionError("Perron-Frobenius vector is not positive")
    if all(float(x).is_integer() for row in B for x in row) and not alpha > 1:
        raise AssertionError("integer positive matrix with alpha <= 1")
    return SpectralReport(tuple(map(tuple, B)), float(alpha), u, residual, it)


@dataclass(frozen=True)
class PairingResult:
    status: str  # "pass", "fail" or "skipped"
    alpha: float = float("nan")
    partner: complex | None = None
    pairings: int = 0
    product_error: float = float("nan")
    null_moduli: tuple = ()
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _restriction_to_nullspace(B: Matrix, basis: list) -> Matrix:
    """Matrix of ``B`` on span(basis), exact; requires ``B`` to preserve the span."""
    k = len(basis)
    cols = []
    for b in basis:
        img = matvec(B, b)
        # solve sum_j c_j basis_j = img
        system = tuple(tuple(basis[j][i] for j in range(k)) + (-img[i],) for i in range(len(img)))
        sol = kernel(system)
        sol = [s for s in sol if s[-1] != 0]
        if not sol:
            raise AssertionError("B does not preserve the nullspace")
        s = sol[0]
        cols.append(tuple(Fraction(x) / s[-1] for x in s[:-1]))
    return tuple(zip(*cols))


def pf_pairing_check(B: Matrix, pi: Permutation, tol: float = 1e-8,
                     pair_tol: float = 1e-6, cond_limit: float = 1e8) -> PairingResult:
    """Numerical check that exactly one eigenvector pairs with the PF vector.

    Eigenvectors are normalised to unit length; a pairing counts as non-zero
    above ``pair_tol``.  Ill-conditioned eigenbases are reported as skipped.
    """
    B = tuple(tuple(int(x) for x in row) for row in B)
    L = l_matrix(pi)
    if matmul(matmul(transpose(B), L), B) != L:
        raise ValueError("B is not a cycle matrix at pi (B^T L B != L)")
    if not is_positive(B):
        raise ValueError("B must be entrywise positive")
    M = np.array(B, dtype=float)
    w, V = np.linalg.eig(M)
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > cond_limit:
        return PairingResult("skipped", reason=f"eigenbasis condition number {cond:.3e}")
    V = V / np.linalg.norm(V, axis=0)
    i1 = int(np.argmax(w.real))
    alpha = float(w[i1].real)
    u1 = V[:, i1].real
    u1 = u1 / u1.sum()
    Lf = np.array(L, dtype=float)
    null_res = np.linalg.norm(Lf @ V, axis=0)
    pairing = u1 @ Lf @ V
    partners = [j for j in range(len(w)) if j != i1 and null_res[j] > pair_tol and abs(pairing[j]) > pair_tol]
    basis = nullspace_basis_from_sigma(pi)
    moduli: tuple = ()
    if basis:
        C = np.array(_restriction_to_nullspace(B, basis), dtype=float)
        moduli = tuple(float(abs(x)) for x in np.linalg.eigvals(C))
    if len(partners) != 1:
        return PairingResult("fail", alpha, None, len(partners), null_moduli=moduli,
                             reason=f"{len(partners)} non-null pairing partners")
    j = partners[0]
    err = float(abs(w[j] * alpha - 1))
    ok = err <= tol and all(abs(m - 1) <= tol for m in moduli)
    return PairingResult("pass" if ok else "fail", alpha, complex(w[j]), 1, err, moduli,
                         "" if ok else "eigenvalue condition violated")


# ---------------------------------------------------------------------------
# uniqueness of positive cycle products, by brute force
# ---------------------------------------------------------------------------

@dataclass
class MainLemmaReport:
    n: int
    max_len: int
    sides: str
    cycles_examined: int = 0
    positive_cycles: int = 0
    distinct_products: int = 0
    candidate_checks: int = 0
    form_matches: int = 0
    violations: list = field(default_factory=list)
    partial: bool = False

    @property
    def passed(self) -> bool:
        return not self.violations and not self.partial

    def to_json(self) -> dict:
        return {
            "suite": "mainlemma",
            "n": self.n,
            "max_len": self.max_len,
            "sides": self.sides,
            "cycles_examined": self.cycles_examined,
            "positive_cycles": self.positive_cycles,
            "distinct_products": self.distinct_products,
            "candidate_checks": self.candidate_checks,
            "form_matches": self.form_matches,
            "violations": self.violations,
            "partial": self.partial,
        }


def _main_lemma_for(pi: Permutation, max_len: int, sides: str, max_nodes: int | None):
    n = pi.n
    others = [p for p in irreducible_permutations(n) if p != pi]
    Ls = {p: l_matrix(p) for p in others}
    seen: set = set()
    examined = positive = checks = nodes = form_matches = 0
    violations = []
    partial = False
    memo: dict = {}
    for path, end, cols in _walks(pi, max_len, _kinds(sides)):
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            partial = True
            break
        if end != pi:
            continue
        examined += 1
        if not all(x > 0 for col in cols for x in col):
            continue
        positive += 1
        B = tuple(zip(*cols))
        if B in seen:
            continue
        seen.add(B)
        Bt = cols  # rows of B^T are the columns of B
        for other in others:
            L = Ls[other]
            if matmul(matmul(Bt, L), B) == L:
                form_matches += 1
            checks += 1
            hit = peel_decompose(B, other, end=other, memo=memo)
            if hit is not None:
                violations.append({"pi": list(pi.image), "other": list(other.image),
                                   "path": [k.name for k in path], "other_path": hit.tokens()})
    return examined, positive, len(seen), checks, form_matches, violations, partial


def main_lemma_check(n: int, max_len: int = 10, sides: str = "extended",
                     max_nodes: int | None = None, jobs: int = 1) -> MainLemmaReport:
    """No positive cycle product at one permutation is also a cycle product elsewhere."""
    if n < 2:
        raise ValueError("n must be at least 2")
    report = MainLemmaReport(n, max_len, sides)
    perms = list(irreducible_permutations(n))
    args = [(p, max_len, sides, max_nodes) for p in perms]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_main_lemma_star, args))
    else:
        results = [_main_lemma_for(*a) for a in args]
    for examined, positive, distinct, checks, matches, violations, partial in results:
        report.form_matches += matches
        report.cycles_examined += examined
        report.positive_cycles += positive
        report.distinct_products += distinct
        report.candidate_checks += checks
        report.violations.extend(violations)
        report.partial |= partial
    return report


def _main_lemma_star(args):
    return _main_lemma_for(*args)


# ---------------------------------------------------------------------------
# suites (used by the command line)
# ---------------------------------------------------------------------------

def _suite_sigma(n: int, **_) -> dict:
    checked, violations = 0, []
    for k in range(2, n + 1):
        for pi in irreducible_permutations(k):
            checked += 1
            L = l_matrix(pi)
            dim = len(nullspace(L))
            bs = [b_vector(S, k) for S in sigma_partition(pi)]
            ok = len(sigma_partition(pi)) == dim + 1
            ok &= all(not any(matvec(L, b)) for b in bs)
            ok &= rank(tuple(bs)) == dim
            if not ok:
                violations.append(list(pi.image))
    return {"suite": "sigma", "n": n, "checked": checked, "violations": violations}


def _suite_cycles(n: int, max_len: int, sides: str, **_) -> dict:
    checked, periods, violations = 0, {}, []
    for pi in irreducible_permutations(n):
        done: dict = {}
        for path, B in cycle_products(pi, max_len, sides):
            checked += 1
            try:
                if B not in done:
                    done[B] = b_action(pi, B).period
                p = done[B]
                periods[p] = periods.get(p, 0) + 1
            except AssertionError as e:
                violations.append({"pi": list(pi.image), "path": [k.name for k in path], "error": str(e)})
    return {"suite": "cycles", "n": n, "max_len": max_len, "sides": sides, "checked": checked,
            "periods": {str(k): v for k, v in sorted(periods.items())}, "violations": violations}


def _suite_veech(n: int, **_) -> dict:
    checked, violations = 0, []
    for k in range(2, n + 1):
        for pi in irreducible_permutations(k):
            for kind in StepKind:
                checked += 1
                try:
                    veech_action(pi, kind)
                except AssertionError as e:
                    violations.append({"pi": list(pi.image), "kind": kind.name, "error": str(e)})
    return {"suite": "veech", "n": n, "checked": checked, "violations": violations}


def _random_c(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-40, 40), rng.randint(1, 12))


def _suite_signrows(n: int, seed: int, samples: int = 200, **_) -> dict:
    rng = random.Random(seed)
    grid = [Fraction(-3), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)]
    checked, violations = 0, []
    for k in range(3, n + 1):
        perms = list(irreducible_permutations(k))
        for pi in perms:
            for other in perms:
                if other == pi:
                    continue
                for c in grid:
                    checked += 1
                    try:
                        sign_definite_row(pi, other, c)
                    except AssertionError as e:
                        violations.append({"pi": list(pi.image), "other": list(other.image), "c": str(c), "error": str(e)})
        for _ in range(samples):
            pi, other = rng.sample(perms, 2)
            c = _random_c(rng)
            checked += 1
            try:
                sign_definite_row(pi, other, c)
            except AssertionError as e:
                violations.append({"pi": list(pi.image), "other": list(other.image), "c": str(c), "error": str(e)})
    return {"suite": "signrows", "n": n, "seed": seed, "checked": checked, "violations": violations}


def _suite_exclusion(n: int, seed: int, vectors: int = 20, **_) -> dict:
    rng = random.Random(seed)
    checked, violations = 0, []
    for k in range(2, n + 1):
        perms = list(irreducible_permutations(k))
        pairs = [(p, q) for p in perms for q in perms if p != q] or [(p, None) for p in perms]
        for pi, other in pairs:
            for _ in range(vectors):
                v = [Fraction(rng.randint(1, 60), rng.randint(1, 12)) for _ in range(k)]
                checked += 1
                if not positive_vector_exclusion(pi, other, v).passed:
                    violations.append({"pi": list(pi.image), "other": None if other is None else list(other.image),
                                       "v": [str(x) for x in v]})
    return {"suite": "exclusion", "n": n, "seed": seed, "checked": checked, "violations": violations}


def positive_cycle_sample(n: int, count: int, max_len: int, seed: int, sides: str = "extended") -> list:
    """Up to ``count`` distinct ``(pi, kinds, B)`` with ``B`` a positive cycle product."""
    found, seen = [], set()
    for pi in irreducible_permutations(n):
        for path, B in cycle_products(pi, max_len, sides):
            if is_positive(B) and (pi, B) not in seen:
                seen.add((pi, B))
                found.append((pi, path, B))
    rng = random.Random(seed)
    rng.shuffle(found)
    return found[:count]


def _suite_pf(n: int, max_len: int, seed: int, samples: int = 50, **_) -> dict:
    statuses = {"pass": 0, "fail": 0, "skipped": 0}
    failures, skipped = [], []
    for pi, path, B in positive_cycle_sample(n, samples, max_len, seed):
        res = pf_pairing_check(B, pi)
        statuses[res.status] += 1
        entry = {"pi": list(pi.image), "path": [k.name for k in path], "reason": res.reason}
        if res.status == "fail":
            failures.append(entry)
        elif res.status == "skipped":
            skipped.append(entry)
    return {"suite": "pf", "n": n, "max_len": max_len, "seed": seed, "counts": statuses,
            "violations": failures, "skipped": skipped}


def run_suite(name: str, n: int = 3, max_len: int = 6, sides: str = "extended",
              seed: int = 0, jobs: int = 1) -> dict:
    """Run one named verification suite and return a JSON-ready report."""
    if name == "mainlemma":
        return main_lemma_check(n, max_len, sides, jobs=jobs).to_json()
    suites = {
        "sigma": _suite_sigma,
        "cycles": _suite_cycles,
        "veech": _suite_veech,
        "signrows": _suite_signrows,
        "exclusion": _suite_exclusion,
        "pf": _suite_pf,
    }
    if name not in suites:
        raise ValueError(f"unknown suite {name!r}")
    return suites[name](n=n, max_len=max_len, sides=sides, seed=seed)
