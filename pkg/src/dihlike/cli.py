"""Command-line interface.

Exit codes: 0 success, 1 parse error, 2 invariant violation, 3 size cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .abelian import parse_group, parse_morphism
from .dihloop import (
    DihParams,
    NotDihedralLike,
    chi_counts,
    dih_construct,
    is_automorphic_params,
    predicates,
    raw_params,
    squaring_violations,
)
from .isoaut import (
    FormulaNotApplicable,
    RecoveryError,
    aut_report,
    catalog,
    formula_applies,
    inn_structure,
    iso_report,
    recover_m_G,
)
from .loopcore import (
    DEFAULT_CLOSURE_CAP,
    CapExceeded,
    LoopValidationError,
    brute_automorphisms,
    brute_isomorphisms,
    format_table,
    inn_group,
    is_associative,
    is_automorphic_loop,
    is_commutative,
    left_inn_group,
    middle_nucleus,
    read_table,
    right_inn_group,
    square_root_counts,
)

COMMANDS = ("construct", "verify", "chi", "nucleus", "aut", "inn", "iso", "recover", "catalog")

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dihlike", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--m", type=int)
    p.add_argument("--group")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--table")
    p.add_argument("--table2")
    p.add_argument("--mode", choices=("formula", "brute", "both"), default="both")
    p.add_argument("--max-order", type=int, default=8)
    p.add_argument("--cap", type=int, default=DEFAULT_CLOSURE_CAP)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "text"), default="json")
    return p


class JobSpec:
    def __init__(self, args: argparse.Namespace):
        self.command = args.command
        self.args = args
        has_params = any(v is not None for v in (args.m, args.group, args.alpha))
        if has_params and args.table is not None:
            raise UsageError("give either --m/--group/--alpha or --table, not both")
        if args.table2 is not None and args.table is None:
            raise UsageError("--table2 needs --table")
        self.from_table = args.table is not None

    def params(self, strict: bool = True, alpha_text: str | None = None) -> DihParams:
        a = self.args
        if a.m is None or a.group is None:
            raise UsageError("--m and --group are required")
        try:
            G = parse_group(a.group)
            alpha = parse_morphism(alpha_text or a.alpha or "id", G)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if not alpha.is_bijective:
            raise NotDihedralLike("alpha must be an automorphism of G")
        return DihParams(a.m, G, alpha) if strict else raw_params(a.m, G, alpha)


def _loop_summary(Q) -> dict:
    return {
        "order": Q.size,
        "associative": is_associative(Q),
        "commutative": is_commutative(Q),
    }


def _cmd_construct(job: JobSpec):
    P = job.params()
    Q = dih_construct(P)
    if job.args.format == "text":
        return format_table(Q)
    return {"m": P.m, "group": str(P.G), "alpha": str(P.alpha), "table": Q.table.tolist()}


def _cmd_verify(job: JobSpec):
    if job.from_table:
        Q = read_table(job.args.table)
        return {**_loop_summary(Q), "latin": True, "automorphic": is_automorphic_loop(Q)}
    P = job.params(strict=False)
    Q = dih_construct(P)
    generic = is_automorphic_loop(Q)
    closed = is_automorphic_params(P.m, P.G, P.alpha)
    out = {
        **_loop_summary(Q),
        "latin": True,
        "automorphic": generic,
        "automorphic_by_parameters": closed,
        "agree": generic == closed,
    }
    if P.m % 2 == 0 and (P.m == 2 or (P.alpha * P.alpha).is_identity):
        pr = predicates(P)
        out["is_group_by_parameters"] = pr.is_group
        out["is_commutative_group_by_parameters"] = pr.is_commutative_group
    return out


def _cmd_chi(job: JobSpec):
    if job.from_table:
        Q = read_table(job.args.table)
        return {"chi": list(square_root_counts(Q))}
    P = job.params()
    counts = chi_counts(P)
    return {
        "chi": [[i, list(u), c] for (i, u), c in counts.items()],
        "violations": squaring_violations(P, counts),
    }


def _cmd_nucleus(job: JobSpec):
    Q = read_table(job.args.table) if job.from_table else dih_construct(job.params())
    nuc = middle_nucleus(Q)
    return {"order": Q.size, "middle_nucleus": list(nuc), "size": len(nuc), "labels": [Q.label(x) for x in nuc]}


def _cmd_aut(job: JobSpec):
    if job.from_table:
        Q = read_table(job.args.table)
        return {"order": Q.size, "aut_order_brute": len(brute_automorphisms(Q))}
    return aut_report(job.params(), job.args.mode, job.args.cap)


def _cmd_inn(job: JobSpec):
    cap = job.args.cap
    Q = read_table(job.args.table) if job.from_table else dih_construct(job.params())
    out = {
        "order": Q.size,
        "inn_order": inn_group(Q, cap).order,
        "left_inn_order": left_inn_group(Q, cap).order,
        "right_inn_order": right_inn_group(Q, cap).order,
    }
    if not job.from_table:
        P = job.params()
        if formula_applies(P.G, P.alpha):
            s = inn_structure(P.m, P.G, P.alpha)
            out["structure_left_order"] = len(s.left_inner)
            out["structure_full_order"] = len(s.full_inner)
    return out


def _cmd_iso(job: JobSpec):
    if job.from_table:
        if job.args.table2 is None:
            raise UsageError("iso with --table needs --table2")
        Q1, Q2 = read_table(job.args.table), read_table(job.args.table2)
        isos = brute_isomorphisms(Q1, Q2)
        return {"isomorphic": bool(isos), "iso_count_brute": len(isos)}
    if job.args.beta is None:
        raise UsageError("iso needs --beta")
    return iso_report(job.params(), job.params(alpha_text=job.args.beta), job.args.mode)


def _cmd_recover(job: JobSpec):
    Q = read_table(job.args.table) if job.from_table else dih_construct(job.params())
    shape = recover_m_G(Q)
    return {"m": shape.m, "g_divisors": list(shape.g_divisors)}


def _cmd_catalog(job: JobSpec):
    rows = []
    for e in catalog(job.args.max_order):
        rows.append(
            {
                "order": e.order,
                "m": e.m,
                "group": str(e.group),
                "alpha": str(e.alpha),
                "class_size": e.class_size,
                "associative": e.is_group,
                "commutative": e.is_commutative,
            }
        )
    return {"max_order": job.args.max_order, "classes": rows, "count": len(rows)}


def _render(result) -> str:
    if isinstance(result, str):
        return result
    return json.dumps(result, indent=2, sort_keys=True) + "\n"


def _render_text(result) -> str:
    if isinstance(result, str):
        return result
    if "classes" in result:
        lines = [f"{'order':>5} {'m':>3}  {'group':<12} {'alpha':<24} {'size':>5}  kind"]
        for r in result["classes"]:
            kind = "abelian group" if r["commutative"] else "group" if r["associative"] else "loop"
            lines.append(
                f"{r['order']:>5} {r['m']:>3}  {r['group']:<12} {r['alpha']:<24} {r['class_size']:>5}  {kind}"
            )
        lines.append(f"{result['count']} classes")
        return "\n".join(lines) + "\n"
    return "".join(f"{k}: {result[k]}\n" for k in sorted(result))


HANDLERS = {
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "chi": _cmd_chi,
    "nucleus": _cmd_nucleus,
    "aut": _cmd_aut,
    "inn": _cmd_inn,
    "iso": _cmd_iso,
    "recover": _cmd_recover,
    "catalog": _cmd_catalog,
}


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    try:
        args = build_parser().parse_args(argv)
        job = JobSpec(args)
        result = HANDLERS[job.command](job)
    except (UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotDihedralLike, LoopValidationError, RecoveryError, FormulaNotApplicable, ValueError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except CapExceeded as exc:
        print(f"size cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    text = _render_text(result) if args.format == "text" else _render(result)
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
