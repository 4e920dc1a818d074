"""Command-line interface.

Exit codes: 0 when the command ran and its verdicts came out as expected,
1 when a verdict deviated (an audit failure, a refuted certification, an
exhausted search, ...), 2 on operational errors such as unreadable files,
parse errors, or exceeded caps.

Structured output (``--format structured``) prints a single JSON object
per command whose keys are documented in the README; parsing that JSON
and re-serializing it is the identity, which keeps reports scriptable.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .algebra import (IntegralGroupSpec, certify_row_independence,
                      certify_row_independence_rational,
                      decide_row_independence, format_element,
                      format_row_file, parse_row_file)
from .catalog import bundled_catalog_dir
from .config import Config, load_config
from .equations import (classify, det_int, exponent_matrix, parse_system_file,
                        rank_mod_p)
from .errors import GroupEqError
from .groups import (all_subgroups, center, derived_series, is_metabelian,
                     is_nilpotent, load_group_file, normal_subgroups,
                     prime_factors, sylow_subgroup)
from .smallgroups import enumerate_groups
from .verifiers import (audit_catalog, brute_force_solve, classify_group,
                        counterexample_build, counterexample_text,
                        obstruction_check)
from .wreath import (extract_rows, coordinatewise_transform, normalize_top_component,
                     wreath_product)


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "structured":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _resolve_path(token: str) -> Path:
    """Paths starting with @examples/ or @catalog/ point at bundled data."""
    from .catalog import resolve_data_path
    return resolve_data_path(token)


def _matrix_lines(M: list[list[int]]) -> list[str]:
    if not M:
        return ["  (no equations)"]
    width = max((len(str(x)) for row in M for x in row), default=1)
    return ["  [ " + "  ".join(str(x).rjust(width) for x in row) + " ]"
            for row in M]


# ---------------------------------------------------------------------------
# subcommands

def cmd_analyze_system(args, config: Config) -> int:
    system = parse_system_file(_resolve_path(args.file))
    E = exponent_matrix(system)
    cls = classify(system)
    primes = sorted(set(config.classify_primes) | set(args.prime or []))
    verdicts = {p: rank_mod_p(E, p) == len(system.words) for p in primes}
    det = det_int(E) if E and len(E) == len(E[0]) else None
    payload = {
        "variables": list(system.variables),
        "equations": len(system.words),
        "matrix": E,
        "determinant": det,
        "classification": cls.to_dict(),
        "p_nonsingular": {str(p): v for p, v in verdicts.items()},
    }
    lines = [f"system: {len(system.words)} equations, "
             f"{len(system.variables)} variables "
             f"({', '.join(system.variables)})",
             "exponent matrix:"]
    lines += _matrix_lines(E)
    if det is not None:
        lines.append(f"determinant: {det}")
    lines.append("invariant factors: " +
                 (", ".join(map(str, cls.invariant_factors)) or "(none)"))
    lines.append(f"non-singular: {'yes' if cls.nonsingular else 'NO'}")
    lines.append("p-nonsingular: " + ", ".join(
        f"p={p} {'yes' if v else 'NO'}" for p, v in sorted(verdicts.items())))
    if isinstance(cls.singular_primes, tuple):
        sp = "{" + ", ".join(map(str, cls.singular_primes)) + "}"
    else:
        sp = cls.singular_primes
    lines.append(f"singular primes: {sp} ({cls.note})")
    lines.append(f"unimodular: {'yes' if cls.unimodular else 'no'}")
    _emit(args, payload, lines)
    return 0


def cmd_group(args, config: Config) -> int:
    G = load_group_file(_resolve_path(args.file), config)
    series = derived_series(G)
    Z = center(G)
    payload = {
        "name": G.name,
        "order": G.order,
        "abelian": G.is_abelian,
        "metabelian": is_metabelian(G),
        "nilpotent": is_nilpotent(G),
        "center_order": Z.order,
        "derived_series_orders": [S.order for S in series],
        "element_order_multiset": list(G.order_multiset),
    }
    lines = [f"group {G.name}: order {G.order}",
             f"abelian: {G.is_abelian}, metabelian: {is_metabelian(G)}, "
             f"nilpotent: {is_nilpotent(G)}",
             f"center order: {Z.order}",
             "derived series orders: " +
             " > ".join(str(S.order) for S in series),
             "element orders: " + ", ".join(
                 f"{o}x{list(G.order_multiset).count(o)}"
                 for o in sorted(set(G.order_multiset)))]
    if args.subgroups:
        subs = all_subgroups(G, config)
        norms = normal_subgroups(G, config)
        payload["subgroup_orders"] = sorted(S.order for S in subs)
        payload["normal_subgroup_orders"] = sorted(S.order for S in norms)
        lines.append(f"subgroups: {len(subs)} "
                     f"(orders {sorted(set(S.order for S in subs))})")
        lines.append(f"normal subgroups: {len(norms)} "
                     f"(orders {sorted(S.order for S in norms)})")
    for p in prime_factors(G.order):
        payload.setdefault("sylow_orders", {})[str(p)] = \
            sylow_subgroup(G, p).order
    _emit(args, payload, lines)
    return 0


def cmd_classify(args, config: Config) -> int:
    G = load_group_file(_resolve_path(args.file), config)
    report = classify_group(G, config)
    lines = [f"group {report.group_id}: order {report.order}",
             f"metabelian: {report.metabelian}"]
    if report.metabelian:
        if report.witness is not None:
            w = report.witness
            lines.append(f"witness: abelian normal subgroup of order "
                         f"{w.subgroup.order}, prime {w.prime}")
        else:
            lines.append(f"witness: NONE (exhaustive over "
                         f"{report.normals_examined} normal subgroups)")
    lines.append(f"note: {report.note}")
    _emit(args, report.to_dict(), lines)
    return 0


def cmd_audit_catalog(args, config: Config) -> int:
    directory = _resolve_path(args.directory) if args.directory else bundled_catalog_dir()
    orders = None
    if args.orders:
        orders = tuple(int(tok) for tok in args.orders.replace(",", " ").split())
    report = audit_catalog(directory, orders, config)
    lines = []
    for e in report.entries:
        if e.error:
            lines.append(f"{e.file}: LOAD ERROR: {e.error}")
            continue
        r = e.report
        mark = "witness" if r.witness else ("no witness" if r.metabelian
                                            else "skipped")
        lines.append(f"{e.file}: order {r.order}, "
                     f"{'metabelian' if r.metabelian else 'not metabelian'}, "
                     f"{mark}" +
                     (f" (A of order {r.witness.subgroup.order}, "
                      f"p={r.witness.prime})" if r.witness else ""))
    lines.append(f"orders audited: {', '.join(map(str, report.orders))}")
    lines.append(f"pairwise non-isomorphic within orders: {report.pairwise_distinct}")
    lines.append(f"per-order counts match the classification: {report.counts_ok}")
    if report.expected_without_witness:
        lines.append("metabelian without witness (outside the audited "
                     "composite orders): " +
                     "; ".join(report.expected_without_witness))
    if report.deviations:
        lines.append("DEVIATIONS: " + "; ".join(report.deviations))
        lines.append("verdict: FAILED")
    else:
        lines.append("verdict: every audited metabelian group has a witness")
    _emit(args, report.to_dict(), lines)
    ok = (not report.deviations) and report.counts_ok and report.pairwise_distinct
    return 0 if ok else 1


def cmd_wreath_transform(args, config: Config) -> int:
    base = load_group_file(_resolve_path(args.base), config)
    top = load_group_file(_resolve_path(args.top), config)
    W = wreath_product(base, top, config)
    system = parse_system_file(_resolve_path(args.file), group=W)
    if system.binding is None:
        raise GroupEqError("the system file must bind its coefficients "
                           "(use 'bind: @group sym=name ...')")
    norm = normalize_top_component(system, args.prime, config)
    ts = coordinatewise_transform(norm.system)
    ex = extract_rows(ts, args.prime)
    cert = certify_row_independence(ex.rows)

    topg = norm.wreath.top
    var_names = {(i, b): f"y_{i}_{b}" for (i, b) in ts.variables}
    coeff_syms: dict[int, str] = {}
    eq_lines = []
    for j, per_b in enumerate(ts.words):
        for b, word in enumerate(per_b):
            toks = []
            for letter in word:
                if hasattr(letter, "elem"):
                    sym = coeff_syms.setdefault(letter.elem,
                                                f"c{len(coeff_syms) + 1}")
                    toks.append(sym)
                else:
                    tok = var_names[(letter.name, letter.top)]
                    toks.append(tok if letter.sign > 0 else tok + "^-1")
            eq_lines.append(("eq: " + " ".join(toks)).rstrip())
    sys_lines = ["# transformed system over the base group " + base.name,
                 "vars: " + " ".join(var_names[v] for v in ts.variables)]
    if coeff_syms:
        sys_lines.append("coeffs: " + " ".join(coeff_syms.values()))
        sys_lines.append("bind: " + str(args.base) + " " + " ".join(
            f"{sym}={base.names[e]}" for e, sym in coeff_syms.items()))
    sys_lines += eq_lines
    row_lines = ["# rows m[j,1] over the top-group algebra",
                 format_row_file(ex.rows).rstrip()]
    beta_desc = {i: topg.names[t] for i, t in norm.beta.items()}
    payload = {
        "beta": beta_desc,
        "translation_identity_holds": ex.translation_holds,
        "augmentation_matches": ex.augmentation_matches,
        "rows_certified_independent": cert is not None,
        "system": "\n".join(sys_lines),
        "rows": format_row_file(ex.rows),
    }
    lines = [f"wreath product: {base.name} wr {top.name} "
             f"(order {norm.wreath.order})",
             "variable change beta: " + ", ".join(
                 f"{i} -> {i}*{n}" for i, n in beta_desc.items())]
    lines += sys_lines + row_lines
    lines.append(f"translation identity m[j,b] = b*m[j,1]: {ex.translation_holds}")
    lines.append(f"augmentation equals exponent row mod {args.prime}: "
                 f"{ex.augmentation_matches}")
    lines.append(f"rows certified independent: {cert is not None}")
    _emit(args, payload, lines)
    return 0 if (ex.translation_holds and ex.augmentation_matches) else 1


def cmd_certify_rows(args, config: Config) -> int:
    rows = parse_row_file(_resolve_path(args.file).read_text(encoding="utf-8"))
    if isinstance(rows.spec, IntegralGroupSpec):
        cert = certify_row_independence_rational(rows)
        verdict = "certified" if cert else "unknown"
    else:
        verdict = decide_row_independence(rows, config.brute_force_cap)
        cert = certify_row_independence(rows)
    payload = {"algebra": rows.spec.describe(), "rows": len(rows.rows),
               "verdict": verdict}
    lines = [f"algebra: {rows.spec.describe()}",
             f"rows: {len(rows.rows)}"]
    if cert is not None:
        payload["pivot_columns"] = list(cert.pivot_columns)
        payload["minor_det"] = str(cert.minor_det)
        lines.append(f"certificate: augmented rows have a nonsingular minor "
                     f"on columns {list(cert.pivot_columns)} "
                     f"(det {cert.minor_det} over {cert.field})")
    lines.append(f"verdict: {verdict}")
    _emit(args, payload, lines)
    return 0 if verdict in ("certified", "certified-by-search") else 1


def cmd_counterexample(args, config: Config) -> int:
    inst = counterexample_build(args.p, args.q, symbolic=args.symbolic,
                                config=config)
    rep = obstruction_check(inst, config)
    eq_text = counterexample_text(inst.p, inst.q, inst.n, inst.m)
    payload = {
        "p": inst.p, "q": inst.q, "n": inst.n, "m": inst.m,
        "order": inst.order,
        "equation": eq_text,
        "unimodular": inst.classification.unimodular,
        "obstruction": rep.to_dict(),
    }
    lines = [f"parameters: p={inst.p} q={inst.q} n={inst.n} m={inst.m} "
             f"({inst.n}*{inst.p} + {inst.m}*{inst.q} = 1)",
             f"group: C2 wr (C{inst.p} x C{inst.q}), order {inst.order}" +
             ("" if inst.realized else " (not realized; symbolic mode)"),
             f"equation: {eq_text}",
             f"exponent sum of x: 1 (unimodular: "
             f"{inst.classification.unimodular})",
             f"S = {format_element(rep.s_element)}",
             f"ring identity S*(1+ab) = S*(a+b): "
             f"{'holds' if rep.ring_identity_holds else 'FAILS'}"]
    if rep.s_is_zero:
        lines.append("anomaly: S = 0")
    if rep.group_inequality_holds is None:
        lines.append("group inequality: skipped (group not realized)")
        lines.append("obstruction: partial (ring identity only)")
    else:
        lines.append(f"group inequality (c c^(ab))^(1+ab) != (c c^(ab))^(a+b): "
                     f"{'holds' if rep.group_inequality_holds else 'FAILS'}")
        lines.append(f"  lhs = {rep.lhs_vs_rhs[0]}")
        lines.append(f"  rhs = {rep.lhs_vs_rhs[1]}")
        lines.append(f"obstruction: "
                     f"{'confirmed' if rep.confirmed else 'NOT confirmed'}")
    _emit(args, payload, lines)
    if rep.group_inequality_holds is None:
        return 0 if rep.ring_identity_holds else 1
    return 0 if rep.confirmed else 1


def cmd_solve(args, config: Config) -> int:
    group = None
    if args.group:
        group = load_group_file(_resolve_path(args.group), config)
    system = parse_system_file(_resolve_path(args.file), group=group)
    if system.binding is None:
        raise GroupEqError("the system is not bound to a group; pass --group "
                           "and a 'bind: @group ...' line")
    result = brute_force_solve(system, config, descending=args.descending)
    G = system.binding.group
    payload = result.to_dict()
    if result.solution is not None:
        payload["solution_names"] = {v: G.names[i]
                                     for v, i in result.solution.items()}
        lines = ["solution: " + ", ".join(
            f"{v} = {G.names[i]}" for v, i in sorted(result.solution.items())),
            f"(scan position {result.searched})"]
        code = 0
    else:
        lines = [f"no solution: exhaustive search over {result.searched} "
                 "assignments"]
        code = 1
    _emit(args, payload, lines)
    return code


def cmd_enumerate(args, config: Config) -> int:
    from .catalog import EXPECTED_COUNTS
    groups = enumerate_groups(args.n, config)
    payload = {"order": args.n, "count": len(groups),
               "order_multisets": [list(G.order_multiset) for G in groups]}
    lines = [f"groups of order {args.n}: {len(groups)}"]
    for i, G in enumerate(groups, start=1):
        lines.append(f"  {i}: element orders {list(G.order_multiset)}, "
                     f"abelian: {G.is_abelian}")
    code = 0
    if args.n in EXPECTED_COUNTS:
        ok = len(groups) == EXPECTED_COUNTS[args.n]
        payload["matches_classification"] = ok
        lines.append(f"matches the classification count "
                     f"({EXPECTED_COUNTS[args.n]}): {ok}")
        code = 0 if ok else 1
    _emit(args, payload, lines)
    return code


# ---------------------------------------------------------------------------

def _defaults_epilog() -> str:
    from dataclasses import fields
    from .config import DEFAULT_CONFIG
    pairs = ", ".join(f"{f.name}={getattr(DEFAULT_CONFIG, f.name)}"
                      for f in fields(DEFAULT_CONFIG))
    return ("configuration defaults (override via groupeq.conf, the "
            f"GROUPEQ_CONFIG environment variable, or flags): {pairs}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupeq",
        description="Exact tools for systems of equations over finite "
                    "groups: exponent-sum classification, group-ring "
                    "certificates, wreath-product transformations, and a "
                    "small-groups structure audit.",
        epilog=_defaults_epilog())
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="path to a groupeq.conf file")
    parser.add_argument("--jobs", type=int, help="worker count (default 1); "
                        "results are independent of this setting")
    parser.add_argument("--seed", type=int, help="seed for randomized checks "
                        "(default 0)")
    parser.add_argument("--format", choices=("text", "structured"),
                        default=None,
                        help="text (default) or structured JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze-system",
                       help="exponent matrix, determinant, singular primes, "
                            "and unimodularity of a system file")
    p.add_argument("file")
    p.add_argument("--prime", type=int, action="append",
                   help="additional prime to test (repeatable)")
    p.set_defaults(func=cmd_analyze_system)

    p = sub.add_parser("group", help="structural facts about a group file")
    p.add_argument("file")
    p.add_argument("--subgroups", action="store_true",
                   help="also enumerate subgroups")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("classify",
                       help="metabelianity and the abelian-by-abelian-p "
                            "witness search for one group")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("audit-catalog",
                       help="classify every group file in a directory and "
                            "check the catalog invariants")
    p.add_argument("directory", nargs="?",
                   help="directory of .grp files (default: bundled catalog)")
    p.add_argument("--orders", help="comma-separated order filter")
    p.set_defaults(func=cmd_audit_catalog)

    p = sub.add_parser("wreath-transform",
                       help="normalize a system over base wr top and emit "
                            "the per-coordinate equations plus group-ring rows")
    p.add_argument("file")
    p.add_argument("--base", required=True)
    p.add_argument("--top", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=cmd_wreath_transform)

    p = sub.add_parser("certify-rows",
                       help="augmentation-based independence certificate "
                            "for rows over a group algebra")
    p.add_argument("file")
    p.set_defaults(func=cmd_certify_rows)

    p = sub.add_parser("counterexample",
                       help="build the wreath-product instance with its "
                            "unimodular equation and check the obstruction")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--symbolic", action="store_true",
                   help="skip the group realization; ring identity only")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("solve",
                       help="brute-force a bound system inside its group")
    p.add_argument("file")
    p.add_argument("--group", help="group file for 'bind: @group' systems")
    p.add_argument("--descending", action="store_true",
                   help="scan assignments in descending order")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("enumerate",
                       help="exhaustively enumerate groups of a small order "
                            "up to isomorphism")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        overrides = {}
        if args.jobs is not None:
            overrides["jobs"] = args.jobs
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.format is not None:
            overrides["output_format"] = args.format
        if overrides:
            config = replace(config, **overrides)
        if args.format is None:
            args.format = config.output_format
        return args.func(args, config)
    except GroupEqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
