"""Singularity families, golden values, a random corpus, and the batch runner."""

from __future__ import annotations

import csv
import io
import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from functools import reduce
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Optional, Sequence

from .errors import BadIndex, FsigError, NotPolynomial, UnsupportedCharacteristic
from .frobenius import (
    DEFAULT_BUDGET,
    ORACLE_CAP,
    SplittingReport,
    classify_reports,
    fedder_is_fpure,
    fsignature_sequence,
    naive_free_rank_oracle,
    thm54_intermediate,
)
from .linalg import thread_count
from .qseries import a_invariant, artinian_reduction, ci_series, e_prime, sw_bound
from .wpoly import Polynomial, is_prime, make_ring, parse_poly, render, weighted_degree

SCHEMA_VERSION = 1
CSV_COLUMNS = (
    "family", "index", "p", "e", "q", "a_q", "ratio", "a_inv", "eprime", "bound",
    "fedder", "lemma51", "symmetry", "thm54", "golden_match",
)
THM54_SCALES = (2, 3)

PASS, FAIL, SKIP = "pass", "fail", "skip"

_NAMES = ("x", "y", "z", "w", "u", "v")

# family -> minimum supported characteristic.  A_n is often quoted for all
# p >= 2, but x^2+y^2+z^(n+1) is (x+y)^2+z^(n+1) in characteristic 2 and R is
# not reduced, so A_n is restricted to odd primes here.
MIN_PRIME = {"A": 3, "D": 3, "E6": 5, "E7": 5, "E8": 7, "Regular": 2, "Fermat": 2, "Diagonal": 2}


def fmt_q(x) -> str:
    """Render an exact rational as ``num/den`` (integers without a denominator)."""
    if x is None:
        return ""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_q(text):
    text = (text or "").strip()
    return Fraction(text) if text else None


@dataclass
class FamilyEntry:
    family: str
    index: object
    prime: int
    weights: tuple
    equation: str
    sop_degrees: tuple = ()
    min_prime: int = 2
    golden_s: Optional[Fraction] = None
    golden_eprime: Optional[Fraction] = None
    golden_a: Optional[int] = None
    golden_bound: Optional[Fraction] = None
    printed_eprime: Optional[Fraction] = None
    expected_verdict: Optional[str] = None

    @property
    def names(self) -> tuple:
        return _NAMES[: len(self.weights)]

    @property
    def index_label(self) -> str:
        if isinstance(self.index, (tuple, list)):
            return "-".join(str(i) for i in self.index)
        return str(self.index)

    @property
    def entry_id(self) -> str:
        return f"{self.family}_{self.index_label}"

    @property
    def label(self) -> str:
        return f"{self.entry_id}@p={self.prime}"

    def ring(self):
        deg = self.degree()
        return make_ring(self.prime, list(zip(self.names, self.weights)), [deg])

    def degree(self) -> int:
        ambient = make_ring(self.prime, list(zip(self.names, self.weights)))
        return weighted_degree(parse_poly(self.equation, ambient))

    def polynomial(self) -> Polynomial:
        return parse_poly(self.equation, self.ring())

    def has_goldens(self) -> bool:
        return None not in (self.golden_a, self.golden_eprime, self.golden_bound)

    def to_dict(self) -> dict:
        return {
            "id": self.entry_id,
            "family": self.family,
            "index": self.index_label,
            "p": self.prime,
            "weights": list(self.weights),
            "equation": self.equation,
            "sop_degrees": list(self.sop_degrees),
            "golden_s": fmt_q(self.golden_s) or None,
            "golden_eprime": fmt_q(self.golden_eprime) or None,
            "golden_a": self.golden_a,
            "golden_bound": fmt_q(self.golden_bound) or None,
            "printed_eprime": fmt_q(self.printed_eprime) or None,
        }


# -- golden table -------------------------------------------------------------

def load_golden_table(path=None) -> dict:
    """Map ``(family, index)`` to golden values; defaults to the packaged table."""
    if path is None:
        text = resources.files("fsig").joinpath("data/golden_table.csv").read_text()
    else:
        text = Path(path).read_text()
    table = {}
    for row in csv.DictReader(io.StringIO(text)):
        key = (row["family"].strip(), int(row["index"]))
        table[key] = {
            "golden_s": _parse_q(row.get("golden_s")),
            "golden_eprime": _parse_q(row.get("golden_eprime")),
            "golden_a": int(row["golden_a"]) if row.get("golden_a", "").strip() else None,
            "golden_bound": _parse_q(row.get("golden_bound")),
            "printed_eprime": _parse_q(row.get("printed_eprime")),
        }
    return table


def golden_consistency(table: dict, d: int = 2) -> dict:
    """For each golden row: does ``golden_bound`` equal the bound built from its own ``a`` and ``e'``?

    Returns ``{key: (stored_ok, printed_ok)}``, where ``printed_ok`` redoes the
    check with the ``e'`` value as printed in the source table.
    """
    out = {}
    for key, row in sorted(table.items()):
        if None in (row["golden_a"], row["golden_eprime"], row["golden_bound"]):
            continue
        dim = key[1] - 1 if key[0] == "Regular" else d
        stored = sw_bound(row["golden_a"], dim, row["golden_eprime"]) == row["golden_bound"]
        printed = row["printed_eprime"]
        printed_ok = None if printed is None else sw_bound(row["golden_a"], dim, printed) == row["golden_bound"]
        out[key] = (stored, printed_ok)
    return out


def _apply_goldens(entry: FamilyEntry, golden: Optional[dict]) -> FamilyEntry:
    if golden is None:
        golden = load_golden_table()
    row = golden.get((entry.family, entry.index))
    if row:
        for k, v in row.items():
            setattr(entry, k, v)
    return entry


# -- families -------------------------------------------------------------------

def _normalize(weights):
    g = reduce(gcd, weights)
    return tuple(w // g for w in weights)


def ade_entry(family: str, n: int = None, p: int = 3, golden: dict = None) -> FamilyEntry:
    """Rational double point of the given type in characteristic ``p``.

    ``family`` is ``"A"`` or ``"D"`` with index ``n``, or one of
    ``"E6"``, ``"E7"``, ``"E8"`` (``n`` ignored).
    """
    if family == "E" and n in (6, 7, 8):
        family = f"E{n}"
    if family not in ("A", "D", "E6", "E7", "E8"):
        raise BadIndex(f"unknown ADE family {family!r}")
    if not is_prime(p):
        raise UnsupportedCharacteristic(f"{p} is not prime")
    min_p = MIN_PRIME[family]
    if p < min_p:
        raise UnsupportedCharacteristic(f"{family} requires p >= {min_p}, got {p}")
    if family == "A":
        if n is None or n < 1:
            raise BadIndex(f"A_n needs n >= 1, got {n}")
        # weights (n+1, n+1, 2); s.o.p. {x, z}
        entry = FamilyEntry("A", n, p, (n + 1, n + 1, 2), f"x^2+y^2+z^{n + 1}", (n + 1, 2), min_p)
    elif family == "D":
        if n is None or n < 4:
            raise BadIndex(f"D_n needs n >= 4, got {n}")
        # weights (n-1, 2, n-2); s.o.p. {y, z}
        entry = FamilyEntry("D", n, p, (n - 1, 2, n - 2), f"x^2+yz^2+y^{n - 1}", (2, n - 2), min_p)
    elif family == "E6":
        entry = FamilyEntry("E6", 6, p, (6, 4, 3), "x^2+y^3+z^4", (4, 3), min_p)
    elif family == "E7":
        entry = FamilyEntry("E7", 7, p, (9, 6, 4), "x^2+y^3+yz^3", (6, 4), min_p)
    else:
        entry = FamilyEntry("E8", 8, p, (15, 10, 6), "x^2+y^3+z^5", (10, 6), min_p)
    return _apply_goldens(entry, golden)


def regular_entry(nvars: int, p: int, golden: dict = None) -> FamilyEntry:
    """``f = x`` in ``nvars`` standard-graded variables (a regular ring)."""
    if nvars < 2:
        raise BadIndex("regular family needs at least 2 variables")
    entry = FamilyEntry("Regular", nvars, p, (1,) * nvars, "x", (1,) * (nvars - 1), 2)
    return _apply_goldens(entry, golden)


def fermat_entry(p: int, degree: int = 3) -> FamilyEntry:
    """``x^k + y^k + z^k``; for ``k = 3`` the verdict follows ``p mod 3``."""
    expected = None
    if degree == 3 and p != 3:
        expected = "UniqueSummand" if p % 3 == 1 else "NotFPure"
    return FamilyEntry(
        "Fermat", degree, p, (1, 1, 1), f"x^{degree}+y^{degree}+z^{degree}", (1, 1), 2,
        expected_verdict=expected,
    )


def diagonal_entry(exponents: Sequence[int], p: int) -> FamilyEntry:
    """``x^a + y^b + z^c`` with the smallest weights making it homogeneous."""
    exps = tuple(int(k) for k in exponents)
    if len(exps) < 2 or any(k < 1 for k in exps):
        raise BadIndex(f"bad diagonal exponents {exps}")
    lcm = reduce(lambda u, v: u * v // gcd(u, v), exps)
    weights = _normalize([lcm // k for k in exps])
    names = _NAMES[: len(exps)]
    eq = "+".join(f"{x}^{k}" for x, k in zip(names, exps))
    return FamilyEntry("Diagonal", exps, p, weights, eq, weights[1:], 2)


def random_corpus(
    seed: int,
    count: int,
    max_vars: int = 3,
    max_weight: int = 4,
    primes: Sequence[int] = (3, 5, 7),
) -> list:
    """Reproducible weighted-homogeneous trinomials and quadrinomials.

    Entry ``k`` uses ``primes[k % len(primes)]``; every variable occurs in
    some term.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        nv = rng.randint(2, max_vars)
        weights = _normalize([rng.randint(1, max_weight) for _ in range(nv)])
        p = primes[len(out) % len(primes)]
        ring = make_ring(p, list(zip(_NAMES, weights)))
        deg = rng.randint(max(weights), 3 * max(weights))
        monos = list(_exact_degree(weights, deg))
        if len(monos) < 2:
            continue
        nterms = min(len(monos), rng.choice((3, 4)))
        chosen = rng.sample(monos, nterms)
        if any(all(m[j] == 0 for m in chosen) for j in range(nv)):
            continue
        f = Polynomial(ring, {m: rng.randint(1, p - 1) for m in chosen})
        out.append(FamilyEntry("Corpus", len(out), p, weights, render(f), (), 2))
    return out


def _exact_degree(weights, deg):
    n = len(weights)
    exps = [0] * n

    def rec(j, left):
        if j == n - 1:
            if left % weights[j] == 0:
                exps[j] = left // weights[j]
                yield tuple(exps)
            return
        for e in range(left // weights[j] + 1):
            exps[j] = e
            yield from rec(j + 1, left - e * weights[j])

    yield from rec(0, deg)


def reference_suite(golden: dict = None) -> list:
    """ADE, regular and Fermat entries at the characteristics exercised by verify-paper."""
    golden = load_golden_table() if golden is None else golden
    entries = []
    for n in range(1, 5):
        for p in (3, 5):
            entries.append(ade_entry("A", n, p, golden))
    for n in range(4, 7):
        for p in (3, 5):
            entries.append(ade_entry("D", n, p, golden))
    for fam, primes in (("E6", (5, 7)), ("E7", (5, 7)), ("E8", (7,))):
        for p in primes:
            entries.append(ade_entry(fam, None, p, golden))
    for nv in (2, 3):
        for p in (2, 3, 5):
            entries.append(regular_entry(nv, p, golden))
    for p in (5, 7, 11, 13):
        entries.append(fermat_entry(p))
    return entries


# -- experiment records -------------------------------------------------------------

@dataclass
class ExperimentRecord:
    entry: FamilyEntry
    e_max: int
    a_inv: Optional[int] = None
    eprime: Optional[Fraction] = None
    bound: Optional[Fraction] = None
    fedder: Optional[bool] = None
    verdict: Optional[str] = None
    reports: list = field(default_factory=list)
    per_e: dict = field(default_factory=dict)  # e -> {"lemma51", "symmetry", "thm54"}
    thm54: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    error: Optional[str] = None
    timestamp: str = ""

    def failures(self) -> list:
        out = [name for name, v in sorted(self.checks.items()) if v == FAIL]
        if self.error:
            out.append(f"error: {self.error}")
        return out

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "entry": self.entry.to_dict(),
            "e_max": self.e_max,
            "a_inv": self.a_inv,
            "eprime": fmt_q(self.eprime) or None,
            "bound": fmt_q(self.bound) or None,
            "fedder": self.fedder,
            "verdict": self.verdict,
            "reports": [r.to_dict(timings) for r in self.reports],
            "thm54": self.thm54,
            "checks": dict(sorted(self.checks.items())),
            "error": self.error,
        }
        if timings:
            out["timestamp"] = self.timestamp
        return out


def _combine(values) -> str:
    values = [v for v in values if v is not None]
    if not values:
        return SKIP
    return PASS if all(values) else FAIL


def _golden_match(entry, d, a_inv, eprime, bound) -> str:
    if not entry.has_goldens():
        return SKIP
    ok = (
        a_inv == entry.golden_a
        and eprime == entry.golden_eprime
        and bound == entry.golden_bound
        and sw_bound(entry.golden_a, d, entry.golden_eprime) == entry.golden_bound
    )
    return PASS if ok else FAIL


def run_entry(entry: FamilyEntry, e_max: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> ExperimentRecord:
    """Compute every invariant and check for one catalog entry; never raises."""
    rec = ExperimentRecord(entry, e_max, timestamp=datetime.now(timezone.utc).isoformat())
    checks = rec.checks
    try:
        ring = entry.ring()
        f = entry.polynomial()
        d = ring.nvars - 1
        deg = weighted_degree(f)
        series = ci_series(ring.weights, [deg])
        rec.a_inv = a_invariant(series)
        rec.eprime = e_prime(series, d)
        rec.bound = sw_bound(rec.a_inv, d, rec.eprime) if d >= 1 else None
        rec.fedder = fedder_is_fpure(f, ring)
        checks["prop22"] = FAIL if (rec.fedder and rec.a_inv > 0) else PASS
        checks["golden_match"] = _golden_match(entry, d, rec.a_inv, rec.eprime, rec.bound)

        sop_ok = None
        if entry.sop_degrees:
            try:
                artinian_reduction(series, entry.sop_degrees)
                sop_ok = True
            except NotPolynomial:
                sop_ok = False
        checks["sop_valid"] = SKIP if sop_ok is None else (PASS if sop_ok else FAIL)

        rec.reports = fsignature_sequence(f, ring, e_max, budget=budget, threads=threads)
        done = [r for r in rec.reports if isinstance(r, SplittingReport)]
        cls = classify_reports(rec.fedder, rec.a_inv, rec.reports)
        rec.verdict = cls.verdict
        checks["classification"] = SKIP if not done else (PASS if cls.consistent else FAIL)
        if entry.expected_verdict is not None:
            checks["verdict"] = SKIP if not done else (PASS if cls.verdict == entry.expected_verdict else FAIL)

        checks["aq_range"] = _combine([0 <= r.a_q <= r.q**d for r in done])
        checks["lemma51"] = _combine([r.lemma51_ok for r in done])
        first = next((r for r in done if r.e == 1), None)
        checks["fedder_consistency"] = SKIP if first is None else (PASS if (first.a_q >= 1) == rec.fedder else FAIL)
        if entry.family == "Regular":
            checks["kunz"] = _combine([r.a_q == r.q**d for r in done])
        if entry.golden_bound is not None and entry.family != "Regular":
            checks["bound_respected"] = _combine(
                [r.ratio <= entry.golden_bound + Fraction(2, r.q) for r in done]
            )

        if first is not None and first.q**ring.nvars <= ORACLE_CAP:
            checks["oracle"] = PASS if naive_free_rank_oracle(f, ring, 1) == first.a_q else FAIL
        else:
            checks["oracle"] = SKIP

        sym_all, thm_all = [], []
        for r in done:
            row = {"lemma51": r.lemma51_ok, "symmetry": None, "thm54": None}
            if sop_ok:
                syms, holds = [], []
                for N in THM54_SCALES:
                    ok, data = thm54_intermediate(f, ring, r.e, entry.sop_degrees, N, report=r)
                    syms.append(data["symmetric"])
                    holds.append(ok)
                    rec.thm54.append({"e": r.e, "N": N, "a_q": data["a_q"], "T": data["T"],
                                      "rhs": data["rhs"], "holds": ok, "symmetric": data["symmetric"]})
                row["symmetry"], row["thm54"] = all(syms), all(holds)
                sym_all.append(row["symmetry"])
                thm_all.append(row["thm54"])
            rec.per_e[r.e] = row
        checks["symmetry"] = _combine(sym_all)
        checks["thm54"] = _combine(thm_all)
    except FsigError as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def run_suite(entries: Sequence[FamilyEntry], e_max: int, budget: int = DEFAULT_BUDGET, threads: int = None) -> list:
    """Run every entry; results sorted by ``(entry id, prime)`` regardless of scheduling."""
    threads = thread_count() if threads is None else max(1, threads)
    if threads == 1:
        records = [run_entry(en, e_max, budget) for en in entries]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda en: run_entry(en, e_max, budget), entries))
    return sorted(records, key=lambda r: (r.entry.family, _sort_index(r.entry.index), r.entry.prime))


def _sort_index(index):
    return tuple(index) if isinstance(index, (tuple, list)) else (index,)


def _flag(v) -> str:
    if v is None:
        return SKIP
    if isinstance(v, str):
        return v
    return "true" if v else "false"


def csv_rows(records: Sequence[ExperimentRecord]) -> list:
    rows = []
    for rec in records:
        en = rec.entry
        base = {
            "family": en.family,
            "index": en.index_label,
            "p": en.prime,
            "a_inv": "" if rec.a_inv is None else rec.a_inv,
            "eprime": fmt_q(rec.eprime),
            "bound": fmt_q(rec.bound),
            "fedder": _flag(rec.fedder),
            "golden_match": rec.checks.get("golden_match", SKIP),
        }
        if not rec.reports:
            rows.append({**base, "e": "", "q": "", "a_q": "error" if rec.error else SKIP, "ratio": "",
                         "lemma51": SKIP, "symmetry": SKIP, "thm54": SKIP})
        for r in rec.reports:
            if isinstance(r, SplittingReport):
                per = rec.per_e.get(r.e, {})
                rows.append({**base, "e": r.e, "q": r.q, "a_q": r.a_q, "ratio": fmt_q(r.ratio),
                             "lemma51": _flag(per.get("lemma51")),
                             "symmetry": _flag(per.get("symmetry")),
                             "thm54": _flag(per.get("thm54"))})
            else:
                rows.append({**base, "e": r.e, "q": r.q, "a_q": SKIP, "ratio": "",
                             "lemma51": SKIP, "symmetry": SKIP, "thm54": SKIP})
    return rows


def write_reports(records: Sequence[ExperimentRecord], out_dir, stem: str = "suite", timings: bool = False):
    """Write ``<stem>.csv`` and ``<stem>.json``; returns both paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    json_path = out_dir / f"{stem}.json"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(csv_rows(records))
    doc = {"schema": SCHEMA_VERSION, "records": [r.to_dict(timings) for r in records]}
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return csv_path, json_path
