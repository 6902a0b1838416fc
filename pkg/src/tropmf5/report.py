"""Text and JSON renderings of a Gröbner basis run.

JSON reports carry a ``schema`` tag; every number is written as a string
(integers, rationals ``a/b``, or ``a + O(p^m)``) so that reports can be
diffed bit for bit. Nothing in either rendering depends on the clock or
on hash ordering.
"""

from __future__ import annotations

import json

from .mf5 import GroebnerReport
from .poly import format_monomial
from .scalars import INF

SCHEMA = "tropmf5-report/1"


def _num(x) -> str:
    return "inf" if x == INF else str(x)


def basis_polys(report: GroebnerReport) -> list:
    """Basis polynomials, divided by their leading coefficient over the exact backend."""
    out = []
    for g in report.basis:
        poly = g.poly.normalized(report.order) if report.status == "exact" else g.poly
        out.append(poly)
    return out


def report_to_dict(report: GroebnerReport, names, context: dict | None = None,
                   ledger=None, oracle: dict | None = None) -> dict:
    order = report.order
    polys = basis_polys(report)
    data = {
        "schema": SCHEMA,
        "problem": dict(context or {}),
        "run": {
            "algorithm": report.algorithm,
            "carry": report.carry if report.algorithm == "naive" else None,
            "pivot_pool": report.pivot_pool if report.algorithm == "naive" else None,
            "degree_bound": _num(report.degree_bound),
            "status": report.status,
            "input_precision": None if report.input_precision is None else _num(report.input_precision),
        },
        "steps": [
            {
                "degree": _num(s.degree),
                "generator": _num(s.generator),
                "rows": _num(s.nrows),
                "cols": _num(s.ncols),
                "rank": _num(s.rank),
                "zero_rows": _num(s.zero_rows),
                "pivot_valuations": [_num(v) for v in s.pivot_valuations],
                "loss": _num(s.loss),
                "leading_monomials": [format_monomial(m, names) for m in s.leading_monomials],
                "repaired": s.repaired,
            }
            for s in report.steps
        ],
        "lm_by_degree": {
            _num(d): [format_monomial(m, names) for m in lms]
            for d, lms in sorted(report.lm_by_degree.items())
        },
        "lm_ideal": [
            format_monomial(m, names)
            for m in sorted(report.lm_ideal, key=lambda m: (sum(m), order.monomial_key(m)), reverse=True)
        ],
        "basis": [
            {
                "degree": _num(g.degree),
                "generator": _num(g.generator),
                "leading_monomial": format_monomial(g.leading.monomial, names),
                "leading_coefficient": str(p.coefficient(g.leading.monomial)),
                "polynomial": p.format(names, order),
            }
            for g, p in zip(report.basis, polys)
        ],
        "loss": {
            "total": _num(report.total_loss),
            "max_step": _num(report.max_step_loss),
        },
    }
    if report.status == "capped":
        data["loss"]["min_output_precision"] = _num(report.min_output_precision())
    if ledger is not None:
        data["precision_analysis"] = ledger.to_dict() if hasattr(ledger, "to_dict") else ledger
    if oracle is not None:
        data["oracle"] = oracle
    return data


def report_to_json(report: GroebnerReport, names, **kw) -> str:
    return json.dumps(report_to_dict(report, names, **kw), indent=2, sort_keys=False) + "\n"


def report_to_text(report: GroebnerReport, names, context: dict | None = None,
                   ledger=None, oracle: dict | None = None) -> str:
    data = report_to_dict(report, names, context, ledger, oracle)
    out = []
    if context:
        out.append("problem: " + " ".join(f"{k}={v}" for k, v in context.items()))
    run = data["run"]
    line = f"algorithm: {run['algorithm']}"
    if run["carry"]:
        line += f"  carry: {run['carry']}  pivot pool: {run['pivot_pool']}"
    out.append(line)
    out.append(f"degree bound: {run['degree_bound']}  arithmetic: {run['status']}"
               + (f" (input precision {run['input_precision']})" if run["input_precision"] else ""))
    out.append("")
    out.append("steps:")
    for s in data["steps"]:
        out.append(
            f"  d={s['degree']:>2} f{s['generator']}: {s['rows']}x{s['cols']}, rank {s['rank']}, "
            f"zero rows {s['zero_rows']}, pivot valuations [{', '.join(s['pivot_valuations'])}], "
            f"loss {s['loss']}" + ("  (rows rebuilt)" if s["repaired"] else "")
        )
    out.append("")
    out.append("leading monomials by degree:")
    for d, lms in data["lm_by_degree"].items():
        out.append(f"  {d}: {', '.join(lms) if lms else '-'}")
    out.append("")
    out.append("minimal leading monomials: " + (", ".join(data["lm_ideal"]) or "-"))
    out.append("")
    out.append("basis:")
    for k, g in enumerate(data["basis"], start=1):
        out.append(f"  g{k} (degree {g['degree']}, from f{g['generator']}): {g['polynomial']}")
    out.append("")
    loss = data["loss"]
    out.append(f"loss in precision: total {loss['total']}, largest step {loss['max_step']}")
    if "min_output_precision" in loss:
        out.append(f"smallest output precision: O(p^{loss['min_output_precision']})")
    if ledger is not None:
        pa = data["precision_analysis"]
        out.append("")
        out.append(f"precision analysis: sufficient input precision {pa['prec_mf5trop']}, "
                   f"guaranteed loss {pa['loss_mf5trop']}")
        for s in pa["steps"]:
            out.append(f"  d={s['degree']:>2} f{s['generator']}: delta {s['delta']}, box {s['box']}, "
                       f"observed {s['observed_loss']} ({s['method']})")
        if "verdict" in pa:
            out.append(f"  input precision verdict: {pa['verdict']}")
    if oracle is not None:
        out.append("")
        out.append(f"oracle agreement: {oracle['agreement']}")
    return "\n".join(out) + "\n"
