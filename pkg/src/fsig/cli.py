"""Command-line entry point: ``fsig bound|aq|fsignature|classify|corpus|verify-paper``."""

from __future__ import annotations

import functools
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click

from . import catalog
from ._backend import BACKEND
from .errors import (
    BudgetExceeded,
    ExponentOverflow,
    FsigError,
    NotHomogeneous,
    PolynomialSyntaxError,
    RingError,
    UnknownVariable,
)
from .frobenius import (
    DEFAULT_BUDGET,
    ORACLE_CAP,
    SkippedReport,
    SplittingReport,
    classify_theorem53,
    free_rank_aq,
    naive_free_rank_oracle,
)
from .qseries import a_invariant, ci_series, e_prime, render_series, sw_bound
from .wpoly import make_ring, parse_poly, weighted_degree

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_HOMOGENEITY, EXIT_ORACLE, EXIT_BUDGET = 0, 1, 2, 3, 4, 5


class InputError(FsigError):
    pass


@dataclass
class JobSpec:
    prime: Optional[int] = None
    variables: list = field(default_factory=list)
    poly: Optional[str] = None
    e_max: int = 1
    budget: int = DEFAULT_BUDGET
    out: Optional[str] = None

    @classmethod
    def from_sources(cls, job_file, **flags) -> "JobSpec":
        """Merge a JSON job file with command-line flags; flags win."""
        data = {}
        if job_file:
            try:
                data = json.loads(Path(job_file).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot read job file {job_file}: {exc}") from None
        spec = cls()
        merged = {
            "prime": data.get("prime"),
            "variables": data.get("vars", data.get("variables")),
            "poly": data.get("poly"),
            "e_max": data.get("e_max"),
            "budget": data.get("budget"),
            "out": data.get("out"),
        }
        for k, v in flags.items():
            if v is not None:
                merged[k] = v
        if merged["prime"] is None:
            raise InputError("a prime is required (-p or 'prime' in the job file)")
        spec.prime = int(merged["prime"])
        spec.variables = parse_vars(merged["variables"] or "x:1,y:1,z:1")
        spec.poly = merged["poly"]
        spec.e_max = int(merged["e_max"] or 1)
        spec.budget = int(merged["budget"] or DEFAULT_BUDGET)
        spec.out = merged["out"]
        return spec

    def ambient(self):
        return make_ring(self.prime, self.variables)

    def resolve(self):
        """``(ring, f)``; ``f`` is None for a bare polynomial ring."""
        ambient = self.ambient()
        if self.poly is None:
            return ambient, None
        f = parse_poly(self.poly, ambient)
        if f.is_zero():
            raise InputError("the polynomial is zero")
        degs = f.degrees()
        ring = ambient.with_relations([degs.pop()]) if len(degs) == 1 else ambient
        return ring, parse_poly(self.poly, ring)


def parse_vars(spec) -> list:
    """``"x:1,y:2"`` or ``[["x", 1], ...]`` into ``[(name, weight), ...]``."""
    if isinstance(spec, str):
        out = []
        for item in spec.split(","):
            item = item.strip()
            if not item:
                continue
            name, _, w = item.partition(":")
            try:
                out.append((name.strip(), int(w) if w else 1))
            except ValueError:
                raise InputError(f"bad variable spec {item!r}; expected name:weight") from None
        return out
    return [(str(n), int(w)) for n, w in spec]


def fmt(x: Fraction, approx: bool) -> str:
    s = catalog.fmt_q(x)
    if approx:
        s += f" (~{float(x):.6g})"
    return s


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NotHomogeneous as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_HOMOGENEITY)
        except BudgetExceeded as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_BUDGET)
        except (InputError, RingError, PolynomialSyntaxError, UnknownVariable, ExponentOverflow) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        except FsigError as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


def job_options(fn):
    fn = click.option("--job", "job_file", type=click.Path(exists=True, dir_okay=False), help="JSON job file.")(fn)
    fn = click.option("--budget", type=int, default=None, help=f"Max basis size q^n (default {DEFAULT_BUDGET}).")(fn)
    fn = click.option("-f", "--poly", default=None, help='Hypersurface equation, e.g. "x^2+y^2+z^2".')(fn)
    fn = click.option("-v", "--vars", "variables", default=None, help="Variables with weights, e.g. x:1,y:1,z:1.")(fn)
    fn = click.option("-p", "--prime", type=int, default=None, help="Characteristic.")(fn)
    fn = click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")(fn)
    fn = click.option("--approx", is_flag=True, help="Add 6-digit decimal renderings.")(fn)
    return fn


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Frobenius splitting numbers and graded invariants of weighted hypersurfaces."""


@main.command()
@job_options
@_handle_errors
def bound(job_file, prime, variables, poly, budget, as_json, approx):
    """Print d, a(R), e' and the upper bound on s(R)."""
    job = JobSpec.from_sources(job_file, prime=prime, variables=variables, poly=poly, budget=budget)
    ring, f = job.resolve()
    rels = [] if f is None else [weighted_degree(f)]
    series = ci_series(ring.weights, rels)
    d = ring.nvars - len(rels)
    a = a_invariant(series)
    ep = e_prime(series, d)
    b = sw_bound(a, d, ep)
    if as_json:
        click.echo(json.dumps({"d": d, "a": a, "eprime": catalog.fmt_q(ep), "bound": catalog.fmt_q(b),
                               "series": render_series(series)}, sort_keys=True))
        return
    click.echo(f"series  P(R,t) = {render_series(series)}")
    click.echo(f"d       {d}")
    click.echo(f"a(R)    {a}")
    click.echo(f"e'      {fmt(ep, approx)}")
    click.echo(f"bound   {fmt(b, approx)}")


def _hypersurface(job):
    ring, f = job.resolve()
    if f is None:
        raise InputError("this command needs a polynomial (-f)")
    return ring, f


def _report_line(r, approx) -> str:
    if not isinstance(r, SplittingReport):
        return f"e={r.e} q={r.q} skipped ({r.reason})"
    prof = "-" if r.degree_profile is None else "{" + ",".join(f"{n}:{c}" for n, c in sorted(r.degree_profile.items())) + "}"
    lemma = "-" if r.lemma51_ok is None else ("ok" if r.lemma51_ok else "VIOLATED")
    return (f"e={r.e} q={r.q} a_q={r.a_q} ratio={fmt(r.ratio, approx)} "
            f"profile={prof} lemma51={lemma} blocks={r.block_count}")


def _run_reports(job, ring, f, e_values, oracle, as_json, approx, strict_budget):
    reports, mismatches = [], []
    for e in e_values:
        try:
            r = free_rank_aq(f, ring, e, budget=job.budget)
        except BudgetExceeded as exc:
            if strict_budget:
                raise
            reports.append(SkippedReport(e, ring.prime**e, str(exc)))
            break
        reports.append(r)
        if oracle and r.q**ring.nvars <= ORACLE_CAP:
            naive = naive_free_rank_oracle(f, ring, e)
            if naive != r.a_q:
                mismatches.append((e, r.a_q, naive))
    if as_json:
        click.echo(json.dumps({"reports": [r.to_dict() for r in reports],
                               "oracle_mismatches": mismatches}, sort_keys=True))
    else:
        for r in reports:
            click.echo(_report_line(r, approx))
        if oracle:
            click.echo("oracle: " + ("mismatch " + str(mismatches) if mismatches else "agrees"))
    if mismatches:
        sys.exit(EXIT_ORACLE)
    if not any(isinstance(r, SplittingReport) for r in reports):
        sys.exit(EXIT_BUDGET)


@main.command()
@job_options
@click.option("-e", "e", type=int, default=1, show_default=True, help="Frobenius exponent, q = p^e.")
@click.option("--oracle", is_flag=True, help="Cross-check against the unblocked rank computation.")
@_handle_errors
def aq(job_file, prime, variables, poly, budget, as_json, approx, e, oracle):
    """Splitting number a_q for a single e."""
    job = JobSpec.from_sources(job_file, prime=prime, variables=variables, poly=poly, budget=budget)
    ring, f = _hypersurface(job)
    _run_reports(job, ring, f, [e], oracle, as_json, approx, strict_budget=True)


@main.command()
@job_options
@click.option("--e-max", type=int, default=None, help="Largest exponent e (default 1 or job file).")
@click.option("--oracle", is_flag=True, help="Cross-check against the unblocked rank computation.")
@_handle_errors
def fsignature(job_file, prime, variables, poly, budget, as_json, approx, e_max, oracle):
    """Reports for e = 1..e-max; ratios a_q/q^d approximate s(R)."""
    job = JobSpec.from_sources(job_file, prime=prime, variables=variables, poly=poly, budget=budget, e_max=e_max)
    ring, f = _hypersurface(job)
    _run_reports(job, ring, f, range(1, job.e_max + 1), oracle, as_json, approx, strict_budget=False)


@main.command()
@job_options
@click.option("--e-max", type=int, default=2, show_default=True)
@_handle_errors
def classify(job_file, prime, variables, poly, budget, as_json, approx, e_max):
    """Verdict: UniqueSummand, FPureRationalLike, NotFPure or Inconclusive."""
    job = JobSpec.from_sources(job_file, prime=prime, variables=variables, poly=poly, budget=budget)
    ring, f = _hypersurface(job)
    weighted_degree(f)
    c = classify_theorem53(f, ring, e_max, budget=job.budget)
    if as_json:
        click.echo(json.dumps({"verdict": c.verdict, "is_f_pure": c.is_f_pure, "a_inv": c.a_inv,
                               "a_q": list(c.a_q_values), "consistent": c.consistent}, sort_keys=True))
    else:
        click.echo(c.verdict)
        click.echo(f"fedder={c.is_f_pure} a={c.a_inv} a_q={list(c.a_q_values)}", err=True)


def _summarize(records, golden_problems) -> list:
    failed = []
    for rec in records:
        for name in rec.failures():
            failed.append(f"{rec.entry.label}: {name}")
    failed.extend(golden_problems)
    return failed


def _golden_table_problems(table) -> list:
    problems = []
    printed_mismatch = set()
    for (fam, idx), (stored, printed) in catalog.golden_consistency(table).items():
        if not stored:
            problems.append(f"golden table row {fam}_{idx}: bound != sw_bound(a, d, e')")
        if printed is False:
            printed_mismatch.add((fam, idx))
    # the printed D_n e' values are the one known inconsistency of the source table
    expected = {key for key in table if key[0] == "D"}
    if printed_mismatch != expected:
        for fam, idx in sorted(printed_mismatch ^ expected):
            problems.append(f"golden table row {fam}_{idx}: printed e' discrepancy not as documented")
    return problems


@main.command("verify-paper")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="results", show_default=True)
@click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True)
@click.option("--e-max", type=int, default=2, show_default=True)
@click.option("--golden", "golden_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Alternative golden table CSV.")
@click.option("--timings", is_flag=True, help="Include wall-clock fields (breaks byte-identical output).")
@_handle_errors
def verify_paper(out_dir, budget, e_max, golden_path, timings):
    """Run the ADE, regular and Fermat suite and write suite.csv / suite.json."""
    table = catalog.load_golden_table(golden_path)
    records = catalog.run_suite(catalog.reference_suite(table), e_max, budget)
    csv_path, json_path = catalog.write_reports(records, out_dir, timings=timings)
    failed = _summarize(records, _golden_table_problems(table))
    skipped = sum(1 for rec in records for r in rec.reports if not isinstance(r, SplittingReport))
    click.echo(f"{len(records)} entries, {skipped} skipped cells, backend={BACKEND}")
    click.echo(f"wrote {csv_path} and {json_path}")
    if failed:
        click.echo(f"{len(failed)} failed checks:")
        for line in failed:
            click.echo(f"  FAIL {line}")
        sys.exit(EXIT_CHECK)
    click.echo("all checks passed")


@main.command()
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--count", type=int, default=200, show_default=True)
@click.option("--primes", default="3,5,7", show_default=True)
@click.option("--e-max", type=int, default=1, show_default=True)
@click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="results", show_default=True)
@_handle_errors
def corpus(seed, count, primes, e_max, budget, out_dir):
    """Random weighted hypersurfaces: checks F-pure implies a(R) <= 0 and friends."""
    plist = [int(x) for x in primes.split(",") if x.strip()]
    entries = catalog.random_corpus(seed, count, primes=plist)
    records = catalog.run_suite(entries, e_max, budget)
    catalog.write_reports(records, out_dir, stem="corpus")
    pure = sum(1 for r in records if r.fedder)
    failed = _summarize(records, [])
    click.echo(f"{len(records)} entries, {pure} F-pure, {len(failed)} failed checks")
    for line in failed:
        click.echo(f"  FAIL {line}")
    sys.exit(EXIT_CHECK if failed else EXIT_OK)


if __name__ == "__main__":
    main()
