"""Splitting numbers of hypersurfaces ``S/(f)`` in characteristic p.

``a_q`` is the rank of multiplication by ``f^(q-1)`` on ``S/m^[q]``, i.e. the
length of ``S/(m^[q] : f^(q-1))``.  For weighted-homogeneous ``f`` the map
shifts degree by ``(q-1) deg f``, so it splits into one block per source
degree; blocks with source degree above ``-a(q-1)`` have no targets at all.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, NotHomogeneous, UnitPolynomial, ZeroPolynomial
from .linalg import MatrixFp, batch_rank, kernel_basis_fp, rank_fp
from .qseries import (
    a_invariant,
    artinian_reduction,
    check_gorenstein_symmetry,
    ci_series,
)
from .wpoly import (
    Polynomial,
    WeightedRing,
    _repeated_mul,
    bracket_normal_form,
    is_homogeneous,
    monomials_up_to,
    poly_mul,
    poly_pow,
    weighted_degree,
)

DEFAULT_BUDGET = 2**21
ORACLE_CAP = 5000
_CHUNK = 1 << 14


@dataclass
class SplittingReport:
    e: int
    q: int
    a_q: int
    ratio: Fraction
    degree_profile: Optional[dict]
    lemma51_ok: Optional[bool]
    block_count: int
    elapsed_ms: int = field(default=0, compare=False)

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "e": self.e,
            "q": self.q,
            "a_q": self.a_q,
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "degree_profile": None
            if self.degree_profile is None
            else {str(n): c for n, c in sorted(self.degree_profile.items())},
            "lemma51_ok": self.lemma51_ok,
            "block_count": self.block_count,
        }
        if timings:
            out["elapsed_ms"] = self.elapsed_ms
        return out


@dataclass
class SkippedReport:
    """Placeholder for an ``e`` whose basis did not fit the budget."""

    e: int
    q: int
    reason: str

    def to_dict(self, timings: bool = False) -> dict:
        return {"e": self.e, "q": self.q, "skipped": self.reason}


@dataclass
class Classification:
    is_f_pure: bool
    a_inv: int
    unique_summand_all_e: bool
    verdict: str
    a_q_values: tuple = ()
    consistent: bool = True


VERDICTS = ("UniqueSummand", "FPureRationalLike", "NotFPure", "Inconclusive")


def _check_f(f: Polynomial):
    if f.is_zero():
        raise ZeroPolynomial("f must be nonzero")
    if f.constant_term():
        raise UnitPolynomial(f"{f} has a nonzero constant term")


def hypersurface_a_invariant(f: Polynomial, ring: WeightedRing) -> int:
    return weighted_degree(f) - sum(ring.weights)


def fedder_is_fpure(f: Polynomial, ring: WeightedRing = None) -> bool:
    """``f^(p-1)`` not in ``m^[p]``."""
    ring = ring or f.ring
    _check_f(f)
    p = ring.prime
    return not bracket_normal_form(poly_pow(f, p - 1), p).is_zero()


def _basis_size(ring, q, budget):
    size = q ** ring.nvars
    if budget is not None and size > budget:
        raise BudgetExceeded(size, budget)
    return size


def _block_matrix(sources, g_exps, g_coef, q, p):
    """Matrix of ``mu -> mu * g mod m^[q]`` with rows indexed by ``sources``."""
    n = g_exps.shape[1]
    radix = q ** np.arange(n, dtype=np.int64)
    step = max(1, _CHUNK // max(1, len(g_coef)))
    rows_all, keys_all, vals_all = [], [], []
    for start in range(0, len(sources), step):
        src = sources[start : start + step]
        tgt = src[:, None, :] + g_exps[None, :, :]
        ok = (tgt < q).all(axis=2)
        ri, ti = np.nonzero(ok)
        rows_all.append(ri + start)
        keys_all.append(tgt[ri, ti] @ radix)
        vals_all.append(g_coef[ti])
    rows = np.concatenate(rows_all) if rows_all else np.zeros(0, dtype=np.int64)
    keys = np.concatenate(keys_all) if keys_all else np.zeros(0, dtype=np.int64)
    vals = np.concatenate(vals_all) if vals_all else np.zeros(0, dtype=np.int64)
    uniq, cols = np.unique(keys, return_inverse=True)
    return MatrixFp.from_coo(len(sources), len(uniq), rows, cols, vals, p), uniq


def _g_arrays(g: Polynomial):
    items = g.sorted_terms()
    n = g.ring.nvars
    exps = np.array([m for m, _ in items], dtype=np.int64).reshape(len(items), n)
    coef = np.array([c for _, c in items], dtype=np.int64)
    return exps, coef


def _graded_blocks(f, ring, q):
    """Source monomials grouped by weighted degree, for degrees ``0..-a(q-1)``."""
    a = hypersurface_a_invariant(f, ring)
    blocks = {}
    for mono in monomials_up_to(ring, q, -a * (q - 1)):
        blocks.setdefault(ring.monomial_degree(mono), []).append(mono)
    return a, {n: np.array(sorted(ms), dtype=np.int64) for n, ms in sorted(blocks.items())}


def free_rank_aq(
    f: Polynomial,
    ring: WeightedRing = None,
    e: int = 1,
    *,
    budget: int = DEFAULT_BUDGET,
    graded: bool = None,
    threads: int = None,
) -> SplittingReport:
    """Splitting number ``a_q`` for ``q = p^e`` with its degree profile.

    ``graded=None`` grades when ``f`` is weighted-homogeneous; ``graded=True``
    on an inhomogeneous ``f`` raises :class:`NotHomogeneous`.
    """
    ring = ring or f.ring
    _check_f(f)
    if e < 1:
        raise ValueError("e must be >= 1")
    t0 = time.perf_counter()
    p = ring.prime
    q = p**e
    d = ring.nvars - 1
    _basis_size(ring, q, budget)
    homogeneous = is_homogeneous(f)
    if graded is None:
        graded = homogeneous
    elif graded and not homogeneous:
        raise NotHomogeneous(f.degrees())

    g = bracket_normal_form(poly_pow(f, q - 1), q)
    if g.is_zero():
        elapsed = int((time.perf_counter() - t0) * 1000)
        return SplittingReport(e, q, 0, Fraction(0), {} if graded else None, True if graded else None, 0, elapsed)
    g_exps, g_coef = _g_arrays(g)

    if graded:
        a, blocks = _graded_blocks(f, ring, q)
        degrees = list(blocks)
        mats = [_block_matrix(blocks[n], g_exps, g_coef, q, p)[0] for n in degrees]
        ranks = batch_rank(mats, threads)
        profile = {n: r for n, r in zip(degrees, ranks) if r}
        a_q = sum(ranks)
        ok = lemma51_holds(profile, a, q)
        nblocks = len(degrees)
    else:
        sources = np.array(list(itertools.product(range(q), repeat=ring.nvars)), dtype=np.int64)
        a_q = rank_fp(_block_matrix(sources, g_exps, g_coef, q, p)[0])
        profile, ok, nblocks = None, None, 1
    elapsed = int((time.perf_counter() - t0) * 1000)
    return SplittingReport(e, q, a_q, Fraction(a_q, q**d), profile, ok, nblocks, elapsed)


def naive_free_rank_oracle(f: Polynomial, ring: WeightedRing = None, e: int = 1) -> int:
    """Rank of the full ``q^n x q^n`` multiplication matrix, built term by term."""
    ring = ring or f.ring
    _check_f(f)
    q = ring.prime**e
    size = q**ring.nvars
    if size > ORACLE_CAP:
        raise BudgetExceeded(size, ORACLE_CAP)
    g = _repeated_mul(f, q - 1)
    basis = list(itertools.product(range(q), repeat=ring.nvars))
    index = {m: i for i, m in enumerate(basis)}
    entries = []
    for i, mono in enumerate(basis):
        image = bracket_normal_form(poly_mul(Polynomial.monomial(ring, mono), g), q)
        for m, c in image.terms.items():
            entries.append((i, index[m], c))
    return rank_fp(MatrixFp.from_entries(size, size, entries, ring.prime))


def splitting_ideal_basis(f: Polynomial, ring: WeightedRing = None, e: int = 1, *, budget: int = ORACLE_CAP) -> list:
    """Polynomials spanning ``(m^[q] : f^(q-1)) / m^[q]`` inside ``S/m^[q]``."""
    ring = ring or f.ring
    _check_f(f)
    q = ring.prime**e
    _basis_size(ring, q, budget)
    g = bracket_normal_form(poly_pow(f, q - 1), q)
    basis = np.array(list(itertools.product(range(q), repeat=ring.nvars)), dtype=np.int64)
    if g.is_zero():
        return [Polynomial.monomial(ring, tuple(m)) for m in basis.tolist()]
    g_exps, g_coef = _g_arrays(g)
    M, _ = _block_matrix(basis, g_exps, g_coef, q, ring.prime)
    # left kernel of M = right kernel of its transpose
    Mt = MatrixFp._from_array(M.to_array().T.copy(), ring.prime, "dense")
    out = []
    for v in kernel_basis_fp(Mt):
        terms = {tuple(basis[i].tolist()): c for i, c in enumerate(v) if c}
        out.append(Polynomial(ring, terms))
    return out


def lemma51_holds(profile: dict, a: int, q: int) -> bool:
    """Every degree carrying a free generator is at most ``-a(q-1)``."""
    return all(n <= -a * (q - 1) for n, c in profile.items() if c > 0)


def fsignature_sequence(
    f: Polynomial, ring: WeightedRing = None, e_max: int = 1, *, budget: int = DEFAULT_BUDGET, threads: int = None
) -> list:
    """Reports for ``e = 1..e_max``; stops with a :class:`SkippedReport` at the first budget overflow."""
    ring = ring or f.ring
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    out = []
    for e in range(1, e_max + 1):
        try:
            out.append(free_rank_aq(f, ring, e, budget=budget, threads=threads))
        except BudgetExceeded as exc:
            out.append(SkippedReport(e, ring.prime**e, str(exc)))
            break
    return out


def classify_reports(is_f_pure: bool, a_inv: int, reports) -> Classification:
    """Verdict from a Fedder outcome, the a-invariant and computed reports."""
    values = tuple(r.a_q for r in reports if isinstance(r, SplittingReport))
    unique = bool(values) and all(v == 1 for v in values)
    if not values:
        return Classification(is_f_pure, a_inv, False, "Inconclusive", values, True)
    if not is_f_pure:
        return Classification(is_f_pure, a_inv, unique, "NotFPure", values, all(v == 0 for v in values))
    if a_inv == 0 and unique:
        return Classification(is_f_pure, a_inv, unique, "UniqueSummand", values, True)
    if a_inv < 0:
        grows = all(x <= y for x, y in zip(values, values[1:])) and values[-1] >= 1
        return Classification(is_f_pure, a_inv, unique, "FPureRationalLike", values, grows)
    return Classification(is_f_pure, a_inv, unique, "Inconclusive", values, False)


def classify_theorem53(
    f: Polynomial, ring: WeightedRing = None, e_max: int = 2, *, budget: int = DEFAULT_BUDGET, threads: int = None
) -> Classification:
    """Sort ``f`` into UniqueSummand / FPureRationalLike / NotFPure / Inconclusive."""
    ring = ring or f.ring
    a = hypersurface_a_invariant(f, ring)
    pure = fedder_is_fpure(f, ring)
    return classify_reports(pure, a, fsignature_sequence(f, ring, e_max, budget=budget, threads=threads))


def thm54_intermediate(
    f: Polynomial,
    ring: WeightedRing,
    e: int,
    sop_degrees,
    N: int = 1,
    *,
    budget: int = DEFAULT_BUDGET,
    report: SplittingReport = None,
):
    """Check ``a_q <= 2 * sum_{n <= T} r_n`` with ``T = floor(-a(q-1)/2)``.

    ``r_n`` are the graded dimensions of ``R/(f_1^q, …, f_d^q)`` for a system
    of parameters of degrees ``N * sop_degrees``.  Returns ``(holds, data)``.
    """
    ring = ring or f.ring
    if N < 1:
        raise ValueError("scale N must be >= 1")
    q = ring.prime**e
    if report is None:
        report = free_rank_aq(f, ring, e, budget=budget)
    deg_f = weighted_degree(f)
    series = ci_series(ring.weights, [deg_f])
    a = a_invariant(series)
    params = [q * N * b for b in sop_degrees]
    prof = artinian_reduction(series, params)
    top = (-a * (q - 1)) // 2
    rhs = 2 * prof.partial_sum(top)
    data = {
        "q": q,
        "a_q": report.a_q,
        "T": top,
        "rhs": rhs,
        "param_degrees": params,
        "socle_degree": prof.socle_degree,
        "symmetric": check_gorenstein_symmetry(prof),
    }
    return report.a_q <= rhs, data
