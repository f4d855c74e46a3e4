"""``twisted-residue verify``: run the exact checks (and optionally the numeric oracle) and report."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict
from functools import cached_property
from typing import Dict, List, Optional, Sequence

from . import __version__
from .expected import canonical_form, case_expected, classes_poly, entries_by_id, load_expected
from .oracle import (CheckReport, check_J_instance, check_line_integral, check_pair_trace, check_pi_plus,
                     check_symbols, evaluate_exact, instance_values, lemma_relation_residual,
                     numeric_case_integral, sample_J)
from .pipelines import (CASE_NAMES, boundary_structure, enumerate_cases, case_term, interior_prefactor,
                        interior_trace_identities, phi_3d, interior_assembly, boundary_assembly_4d,
                        boundary_assembly_3d, BoundaryTermResult)
from .poly import FormalPoly, poly_sum, substitute_J_relations
from .scalar import Scalar, format_scalar, parse_scalar
from .symbols import boundary_evaluate, parametrix, parametrix_defect
from .xi import RatXi, pi_plus

CASES = ("all", "psi1", "psi2", "psi3", "psi4", "psi5", "interior", "pi-plus", "lemma38", "theorem")


class UsageError(Exception):
    pass


def _ratxi(spec: Dict) -> RatXi:
    return RatXi.from_scalars([parse_scalar(c) for c in spec["num"]], spec["a"], spec["b"])


def _cplx(z: complex) -> List[float]:
    return [float(f"{z.real:.12g}"), float(f"{z.imag:.12g}")]


class Session:
    """Lazily computed pipeline values shared by the checks of one run."""

    def __init__(self, table: Dict, dim: int = 4):
        self.table = table
        self.dim = dim
        self.entries = entries_by_id(table)
        self._cases: Dict[tuple, BoundaryTermResult] = {}

    def case(self, name: str, convention: str = "omega-normalized") -> BoundaryTermResult:
        key = (name, convention)
        if key not in self._cases:
            spec = next(s for s in enumerate_cases(4) if CASE_NAMES[s] == name)
            self._cases[key] = case_term(spec, 4, convention)
        return self._cases[key]

    def total(self, convention: str = "omega-normalized") -> FormalPoly:
        return poly_sum((self.case(f"psi{k}", convention).poly for k in range(1, 6)), 4)

    @cached_property
    def phi(self) -> BoundaryTermResult:
        return phi_3d()

    @cached_property
    def phi_geometric(self) -> BoundaryTermResult:
        return phi_3d("geometric")

    @cached_property
    def interior_identities(self):
        return {name: (l, r) for name, l, r in interior_trace_identities(4)}


def _sphere_token(n: int) -> FormalPoly:
    return FormalPoly.gen(("Omega", n - 1))


def _on_shell_size(residual: FormalPoly, n: int, seeds: Sequence[int] = (101, 102, 103)) -> float:
    """Largest |residual| at sampled constrained J data (sphere token set to 1)."""
    worst = 0.0
    for s in seeds:
        inst = sample_J(s, n)
        worst = max(worst, abs(evaluate_exact(residual, inst, {("Omega", n - 1): 1.0})))
    return worst


def _classes_report(entry: Dict) -> List[Dict]:
    return [{"term_class": c["expr"], "sum": c["sum"], "coefficient": c["coefficient"]} for c in entry["classes"]]


def run_entry(entry: Dict, s: Session) -> CheckReport:
    kind = entry["kind"]
    ref = entry["paper_ref"]
    cid = entry["check_id"]
    t0 = time.perf_counter()

    def done(status, expected, computed, **detail) -> CheckReport:
        return CheckReport(cid, status, expected, computed, time.perf_counter() - t0, ref, None, detail)

    if kind == "pi-plus":
        got = pi_plus(_ratxi(entry["input"]))
        want = _ratxi(entry["expected"])
        return done("match" if got == want else "mismatch", repr(want), repr(got))

    if kind == "case":
        n = entry["dim"]
        got = canonical_form(s.case(cid).poly)
        want = canonical_form(case_expected(entry, s.table, n)).scale(4) * _sphere_token(n)
        residual = got - want
        if residual.is_zero():
            return done("match", "per tr[id]*Omega_3 term classes", "identical")
        return done("paper-intermediate-discrepancy", "per tr[id]*Omega_3 term classes",
                    f"computed - reference = {residual}",
                    residual_terms=len(residual.terms),
                    residual_on_constraint_surface=float(f"{_on_shell_size(residual, n):.6g}"))

    if kind == "cancellation":
        total = poly_sum((s.case(p).poly for p in entry["parts"]), 4)
        return done("match" if total.is_zero() else "mismatch", "structural-zero",
                    "structural-zero" if total.is_zero() else str(total))

    if kind == "total":
        ref_entry = s.entries[entry["same_as"]]
        want = canonical_form(case_expected(ref_entry, s.table, 4)).scale(4) * _sphere_token(4)
        residual = canonical_form(s.total()) - want
        return done("match" if residual.is_zero() else "mismatch", "two derivative classes only",
                    "identical" if residual.is_zero() else str(residual))

    if kind == "theorem-4d":
        total = BoundaryTermResult("psi", None, 4, "omega-normalized", s.total())
        a = boundary_assembly_4d(total)
        want = parse_scalar(entry["expected"])
        ok = a.coefficient == want and a.residual.is_zero()
        return done("match" if ok else "mismatch", entry["expected"], format_scalar(a.coefficient),
                    residual="0" if a.residual.is_zero() else str(a.residual))

    if kind == "phi":
        want = canonical_form(classes_poly(entry["classes"], 3)).scale(2) * _sphere_token(3)
        residual = canonical_form(s.phi.poly) - want
        if residual.is_zero():
            return done("match", _classes_report(entry), "identical")
        return done("paper-intermediate-discrepancy", _classes_report(entry), f"computed - reference = {residual}",
                    computed_poly=str(s.phi.poly))

    if kind == "theorem-3d":
        c_t, c_n, residual = boundary_assembly_3d(s.phi)
        want = [parse_scalar(x) for x in entry["expected"]]
        ok = [c_t, c_n] == want and residual.is_zero()
        return done("match" if ok else "mismatch", entry["expected"], [format_scalar(c_t), format_scalar(c_n)])

    if kind == "interior-identity":
        lhs, rhs = s.interior_identities[entry["name"]]
        ok = (lhs - rhs).is_zero()
        return done("match" if ok else "mismatch", "structural-zero", "structural-zero" if ok else str(lhs - rhs))

    if kind == "interior-integrand":
        a = interior_assembly(4)
        got = {k: format_scalar(v) for k, v in a.coefficients.items()}
        want = {k: format_scalar(parse_scalar(v)) for k, v in entry["expected"].items()}
        ok = got == want and a.residual.is_zero()
        return done("match" if ok else "mismatch", want, got)

    if kind == "interior-prefactor":
        got = interior_prefactor(4)
        return done("match" if got == parse_scalar(entry["expected"]) else "mismatch",
                    entry["expected"], format_scalar(got))

    if kind == "lemma-relation":
        residual = lemma_relation_residual_exact(entry["dim"])
        ok = residual.is_zero()
        return done("match" if ok else "mismatch", "structural-zero", "structural-zero" if ok else str(residual))

    if kind == "parametrix-defect":
        r = parametrix_defect(s.dim)
        return done("match" if r.order_minus1_vanishes else "mismatch", "structural-zero", asdict(r))

    raise ValueError(f"unknown entry kind {kind!r}")


def lemma_relation_residual_exact(n: int = 4) -> FormalPoly:
    """Relation engine output for sum a_b^n d_i a_b^i, plus the structure it should negate."""
    second = poly_sum((FormalPoly.gen(("A", min(b, n), max(b, n)), n) * FormalPoly.gen(("DA", i, b, i), n)
                       for b in range(1, n + 1) for i in range(1, n)), n)
    return substitute_J_relations(second, n) + boundary_structure(n)


def _oracle_report(s: "Session", name: str, cid: str, err: float, tol: float, t0: float, **detail) -> CheckReport:
    return CheckReport(cid, "match" if err <= tol else "mismatch", f"<= {tol:g}", float(f"{err:.3g}"),
                       time.perf_counter() - t0, s.table["oracle_refs"][name], tol, detail)


def _compare(s: "Session", name: str, cid: str, exact: complex, num: complex, tol: float, t0: float) -> CheckReport:
    err = abs(exact - num) / max(1.0, abs(exact))
    return _oracle_report(s, name, cid, err, tol, t0, exact=_cplx(exact), numeric=_cplx(num))


def untwisted_check(s: "Session") -> CheckReport:
    """J = id: every case summed numerically must vanish, as must the exact total."""
    t0 = time.perf_counter()
    inst = sample_J(0, 4, identity=True)
    exact = sum(evaluate_exact(s.case(f"psi{k}", "geometric").poly, inst) for k in range(1, 6))
    num = sum(numeric_case_integral(inst, f"psi{k}") for k in range(1, 6))
    return _oracle_report(s, "untwisted", "oracle-untwisted", max(abs(exact), abs(num)), 1e-8, t0,
                          exact=_cplx(exact), numeric=_cplx(num))


def oracle_checks(dim: int, case: str, seeds: Sequence[int], s: Session) -> List[CheckReport]:
    out: List[CheckReport] = []
    if case in ("all", "pi-plus"):
        t0 = time.perf_counter()
        err = max(check_pi_plus(_ratxi(e["input"])) for e in s.table["entries"] if e["kind"] == "pi-plus")
        err = max(err, check_line_integral(RatXi.from_scalars([1], 1, 1)),
                  check_line_integral(RatXi.from_scalars([0, 0, 1], 2, 2)))
        out.append(_oracle_report(s, "pi-plus", "oracle-pi-plus", err, 1e-8, t0))
    psi_names = [f"psi{k}" for k in range(1, 6)] if case in ("all", "theorem") else \
        ([case] if case.startswith("psi") else [])
    for seed in seeds:
        inst = sample_J(seed, dim)
        if case in ("all", "lemma38", "theorem"):
            t0 = time.perf_counter()
            res = check_J_instance(inst)
            lin = max(res["involution"], res["symmetry"], res["anticommute"], res["dJ-symmetric"])
            out.append(_oracle_report(s, "J-constraints", f"oracle-J-constraints-{seed}", lin, 1e-10, t0))
            fd = max(res["finite-difference"], res["derivative-relation"])
            out.append(_oracle_report(s, "J-finite-difference", f"oracle-J-finite-difference-{seed}", fd, 1e-6, t0))
            if dim == 4:
                t0 = time.perf_counter()
                out.append(_oracle_report(s, "lemma38", f"oracle-lemma38-{seed}", lemma_relation_residual(inst),
                                          1e-10, t0))
        if case in ("all", "interior"):
            t0 = time.perf_counter()
            out.append(_oracle_report(s, "traces", f"oracle-traces-{seed}", check_pair_trace(seed, dim), 1e-10, t0))
        if case == "all":
            t0 = time.perf_counter()
            q1, q2 = parametrix(dim)
            err = check_symbols(inst, boundary_evaluate(q1), boundary_evaluate(q2), seed=seed)
            out.append(_oracle_report(s, "symbols", f"oracle-symbols-{seed}", err, 1e-10, t0))
        if dim == 4:
            total_exact, total_num, t_total = 0j, 0j, time.perf_counter()
            for name in psi_names:
                t0 = time.perf_counter()
                exact = evaluate_exact(s.case(name, "geometric").poly, inst)
                num = numeric_case_integral(inst, name)
                total_exact += exact
                total_num += num
                out.append(_compare(s, "psi", f"oracle-{name}-{seed}", exact, num, 1e-6, t0))
            if len(psi_names) == 5:
                out.append(_compare(s, "psi-total", f"oracle-psi-total-{seed}", total_exact, total_num, 1e-6, t_total))
        elif case in ("all", "theorem"):
            t0 = time.perf_counter()
            exact = evaluate_exact(s.phi_geometric.poly, inst)
            num = numeric_case_integral(inst, "phi")
            out.append(_compare(s, "phi", f"oracle-phi-{seed}", exact, num, 1e-6, t0))
    if dim == 4 and case in ("all", "theorem"):
        out.append(untwisted_check(s))
    return out


def select_entries(table: Dict, dim: int, case: str) -> List[Dict]:
    entries = table["entries"]
    if case == "all":
        return list(entries)
    if case.startswith("psi"):
        return [e for e in entries if e["check_id"] == case]
    if case == "interior":
        return [e for e in entries if e["kind"].startswith("interior")]
    if case == "pi-plus":
        return [e for e in entries if e["kind"] == "pi-plus"]
    if case == "lemma38":
        return [e for e in entries if e["kind"] == "lemma-relation"]
    if case == "theorem":
        kind = "theorem-4d" if dim == 4 else "theorem-3d"
        return [e for e in entries if e["kind"] == kind]
    return []


def run_checks(dim: int = 4, case: str = "all", expected: Optional[str] = None, oracle: bool = False,
               seed: int = 0, samples: int = 3) -> List[CheckReport]:
    if dim not in (3, 4):
        raise UsageError("--dim must be 3 or 4")
    if case not in CASES:
        raise UsageError(f"unknown case {case!r}")
    if dim == 3 and case in ("psi1", "psi2", "psi3", "psi4", "psi5", "interior", "lemma38"):
        raise UsageError(f"case {case!r} needs --dim 4")
    table = load_expected(expected)
    s = Session(table, dim)
    reports: List[CheckReport] = []
    for entry in select_entries(table, dim, case):
        if entry.get("dim", dim) != dim:
            reports.append(CheckReport(entry["check_id"], "skipped", None, None, 0.0, entry["paper_ref"],
                                       None, {"reason": f"dimension {entry['dim']} entry"}))
            continue
        try:
            reports.append(run_entry(entry, s))
        except Exception as exc:  # reported, never swallowed silently
            reports.append(CheckReport(entry["check_id"], "error", None, repr(exc), 0.0, entry["paper_ref"]))
    if oracle:
        reports.extend(oracle_checks(dim, case, [seed + k for k in range(samples)], s))
    return reports


def is_anchor(report: CheckReport, table: Dict) -> bool:
    entry = entries_by_id(table).get(report.check_id)
    return entry["anchor"] if entry is not None else True


def exit_code(reports: Sequence[CheckReport], table: Dict) -> int:
    bad = [r for r in reports if r.status in ("mismatch", "error") and is_anchor(r, table)]
    return 1 if bad else 0


def to_json(reports: Sequence[CheckReport], dim: int, seed: int, timings: bool = False) -> str:
    checks = []
    for r in reports:
        d = {"check_id": r.check_id, "status": r.status, "expected": r.expected, "computed": r.computed,
             "paper_ref": r.paper_ref}
        if r.tolerance is not None:
            d["tolerance"] = r.tolerance
        if r.detail:
            d["detail"] = r.detail
        if timings:
            d["elapsed"] = round(r.elapsed, 3)
        checks.append(d)
    return json.dumps({"version": __version__, "dim": dim, "seed": seed, "checks": checks}, indent=2)


def to_text(reports: Sequence[CheckReport]) -> str:
    lines = []
    for r in reports:
        comp = r.computed if isinstance(r.computed, str) else json.dumps(r.computed)
        if len(comp) > 160:
            comp = comp[:157] + "..."
        lines.append(f"{r.status:<32} {r.check_id:<30} [{r.paper_ref}] {comp} ({r.elapsed:.2f}s)")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twisted-residue")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run exact checks against the reference table")
    v.add_argument("--dim", type=int, choices=(3, 4), default=4)
    v.add_argument("--case", choices=CASES, default="all")
    v.add_argument("--emit", choices=("text", "json"), default="text")
    v.add_argument("--expected", default=None, help="path to an alternative expected-values JSON file")
    v.add_argument("--oracle", action="store_true", help="add numeric cross-checks")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=3)
    v.add_argument("--timings", action="store_true", help="include elapsed seconds in JSON output")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.seed < 0 or args.seed >= 2 ** 64 or args.samples < 1:
        parser.print_usage(sys.stderr)
        return 2
    try:
        reports = run_checks(args.dim, args.case, args.expected, args.oracle, args.seed, args.samples)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    table = load_expected(args.expected)
    if args.emit == "json":
        print(to_json(reports, args.dim, args.seed, args.timings))
    else:
        print(to_text(reports))
    return exit_code(reports, table)


if __name__ == "__main__":
    sys.exit(main())
