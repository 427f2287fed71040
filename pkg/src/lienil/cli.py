"""Command-line front end: indices, series, lemmas, scan.

Every command produces a report value with two sections: `payload` (the
mathematical content; byte-stable across runs for fixed inputs and seeds)
and `envelope` (timestamps, wall times, kernel backend).  Text output is a
projection of the payload.

Exit codes: 0 = all verdicts pass, 1 = a mathematical verdict failed,
2 = usage or input error.
"""

import argparse
import json
import sys
import time
from datetime import datetime, timezone

from . import __version__
from ._kernels import backend_name
from .catalog import builtin_catalog, load_group
from .errors import InputError, LienilError, ResourceLimitError
from .groupalgebra import (
    AlgebraContext,
    augmentation_chain,
    check_product_weight_facts,
    check_quadruple_commutator_square,
    check_triple_commutator_shift,
    check_weight3_power_containments,
    lower_lie_chain,
    upper_lie_chain,
)
from .indexformulas import (
    abelian_augmentation_index,
    dimension_subgroup_chain,
    lower_bound_from_derived,
    rank_weight_bound,
    upper_index_closed_form,
)
from .pcgroup import (
    DEFAULT_ORDER_CAP,
    abelian_invariants,
    is_abelian_subgroup,
    lower_central_series,
    section_rank,
    whole_group,
)

DEFAULT_SCAN_CAPS = {2: 64, 3: 243, 5: 125}
DEFAULT_SAMPLES = 64
DEFAULT_SEED = 0


def _now():
    return datetime.now(timezone.utc).isoformat()


def _log_p(value, p):
    k = 0
    while p**k < value:
        k += 1
    return k


def _group_info(group, name):
    series = lower_central_series(group)
    return {
        "name": name,
        "order": group.order,
        "p": group.p,
        "derived_order": series[1].order,
        "class": len(series) - 1,
        "abelian": group.is_abelian,
    }


def _verdict(name, ok, detail):
    return {"name": name, "ok": bool(ok) if ok is not None else None, "detail": detail}


def _bound_payload(report):
    payload = {
        "name": report.name,
        "applicable": report.applicable,
        "holds": report.holds,
    }
    if report.reason:
        payload["reason"] = report.reason
    if report.details:
        payload["details"] = report.details
    return payload


def compute_index_report(group, name, formula_only=False, with_aug=None):
    """The IndexReport payload plus verdicts and wall times."""
    times = {}
    series = lower_central_series(group)
    info = _group_info(group, name)
    p = group.p

    t0 = time.perf_counter()
    dchain = dimension_subgroup_chain(group)
    t_closed = upper_index_closed_form(dchain.d, p)
    times["closed_form"] = time.perf_counter() - t0

    t_lower = t_upper = None
    chain_dims = {"lower": None, "upper": None, "augmentation": None}
    if not formula_only:
        ctx = AlgebraContext(group)
        t0 = time.perf_counter()
        lower_chain, t_lower = lower_lie_chain(ctx)
        times["lower_chain"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        upper_chain, t_upper = upper_lie_chain(ctx)
        times["upper_chain"] = time.perf_counter() - t0
        chain_dims["lower"] = list(lower_chain.dims())
        chain_dims["upper"] = list(upper_chain.dims())

    t_aug = None
    if with_aug is None:
        with_aug = group.is_abelian
    if with_aug:
        ctx = AlgebraContext(group)
        t0 = time.perf_counter()
        aug_chain, t_aug = augmentation_chain(ctx)
        times["augmentation_chain"] = time.perf_counter() - t0
        chain_dims["augmentation"] = list(aug_chain.dims())

    derived_bound = lower_bound_from_derived(group, t_lower=t_lower)
    rank_bound = rank_weight_bound(group, t_lower) if t_lower is not None else None

    verdicts = []
    if formula_only:
        verdicts.append(
            _verdict("oracle_agreement", None, "not checked (--formula-only)")
        )
    else:
        verdicts.append(
            _verdict(
                "sandwich",
                t_lower <= t_upper,
                f"t_lower = {t_lower} <= t_upper = {t_upper}",
            )
        )
        verdicts.append(
            _verdict(
                "oracle_agreement",
                t_upper == t_closed,
                f"brute-force t_upper = {t_upper}, closed form = {t_closed}",
            )
        )
        if not group.is_abelian:
            ok = p + 1 <= t_lower and t_upper <= series[1].order + 1
            verdicts.append(
                _verdict(
                    "index_bounds",
                    ok,
                    f"p+1 = {p + 1} <= t_lower and t_upper <= |G'|+1 = {series[1].order + 1}",
                )
            )
        else:
            verdicts.append(
                _verdict(
                    "commutative_convention",
                    t_lower == 2 and t_upper == 2,
                    "abelian group: both indices equal 2",
                )
            )
    d_sum_ok = dchain.d_sum() == _log_p(series[1].order, p)
    verdicts.append(
        _verdict(
            "d_profile_sum",
            d_sum_ok,
            f"sum d = {dchain.d_sum()}, log_p |G'| = {_log_p(series[1].order, p)}",
        )
    )
    if derived_bound.applicable and derived_bound.holds is not None:
        verdicts.append(
            _verdict(
                "derived_subgroup_bound",
                derived_bound.holds,
                f"t_lower >= {derived_bound.details['bound']}",
            )
        )
    if t_aug is not None and group.is_abelian:
        inv = abelian_invariants(group, whole_group(group))
        formula = abelian_augmentation_index(inv, p)
        verdicts.append(
            _verdict(
                "augmentation_index_formula",
                t_aug == formula,
                f"brute-force t(G) = {t_aug}, closed form = {formula}",
            )
        )

    payload = {
        "kind": "indices",
        "group": info,
        "t_lower": t_lower,
        "t_upper_bruteforce": t_upper,
        "t_upper_closed_form": t_closed,
        "t_augmentation": t_aug,
        "chain_dims": chain_dims,
        "d_profile": [[m + 2, dm] for m, dm in enumerate(dchain.d)],
        "dimension_subgroup_orders": list(dchain.orders()),
        "bounds": {
            "derived_subgroup": _bound_payload(derived_bound),
            "rank_weight": _bound_payload(rank_bound) if rank_bound else None,
        },
        "verdicts": verdicts,
        "params": {"formula_only": formula_only, "with_augmentation": bool(with_aug)},
    }
    return payload, times


def cmd_indices(args):
    group, name = load_group(args.group, order_cap=args.max_order, p=args.p)
    payload, times = compute_index_report(
        group,
        name,
        formula_only=args.formula_only,
        with_aug=True if args.aug else None,
    )
    code = 0 if all(v["ok"] is not False for v in payload["verdicts"]) else 1
    return payload, times, code


def _render_indices(payload, out):
    info = payload["group"]
    out.write(
        f"group {info['name']}: order {info['order']}, p = {info['p']}, "
        f"|G'| = {info['derived_order']}, class {info['class']}\n"
    )
    out.write(
        f"t_lower = {payload['t_lower']}   "
        f"t_upper (brute force) = {payload['t_upper_bruteforce']}   "
        f"t_upper (closed form) = {payload['t_upper_closed_form']}\n"
    )
    if payload["t_augmentation"] is not None:
        out.write(f"t(G) (augmentation ideal) = {payload['t_augmentation']}\n")
    dims = payload["chain_dims"]
    if dims["lower"] is not None:
        out.write(f"lower chain dims: {dims['lower']}\n")
        out.write(f"upper chain dims: {dims['upper']}\n")
    out.write(
        "d profile: "
        + (
            ", ".join(f"d_({m}) = {dm}" for m, dm in payload["d_profile"])
            or "(empty)"
        )
        + "\n"
    )
    for verdict in payload["verdicts"]:
        mark = {True: "pass", False: "FAIL", None: "skip"}[verdict["ok"]]
        out.write(f"[{mark}] {verdict['name']}: {verdict['detail']}\n")


def cmd_series(args):
    group, name = load_group(args.group, order_cap=args.max_order, p=args.p)
    series = lower_central_series(group)
    dchain = dimension_subgroup_chain(group)
    cls = len(series) - 1
    ranks = [
        section_rank(group, series[i - 1], series[i]) for i in range(2, cls + 1)
    ]
    g2 = series[1]
    inv = (
        list(abelian_invariants(group, g2))
        if is_abelian_subgroup(group, g2)
        else None
    )
    payload = {
        "kind": "series",
        "group": _group_info(group, name),
        "gamma_orders": [s.order for s in series],
        "dimension_subgroup_orders": list(dchain.orders()),
        "d_profile": [[m + 2, dm] for m, dm in enumerate(dchain.d)],
        "rank_profile": [[i + 2, r] for i, r in enumerate(ranks)],
        "derived_abelian_invariants": inv,
    }
    return payload, {}, 0


def _render_series(payload, out):
    info = payload["group"]
    out.write(f"group {info['name']}: order {info['order']}, p = {info['p']}\n")
    out.write(f"gamma orders: {tuple(payload['gamma_orders'])}\n")
    out.write(
        f"dimension subgroup orders: {tuple(payload['dimension_subgroup_orders'])}\n"
    )
    out.write(
        "d profile: "
        + (", ".join(f"d_({m}) = {d}" for m, d in payload["d_profile"]) or "(empty)")
        + "\n"
    )
    out.write(
        "rank profile: "
        + (", ".join(f"m_{i} = {r}" for i, r in payload["rank_profile"]) or "(empty)")
        + "\n"
    )
    if payload["derived_abelian_invariants"] is not None:
        out.write(
            f"derived subgroup invariants: {tuple(payload['derived_abelian_invariants'])}\n"
        )
    else:
        out.write("derived subgroup is nonabelian\n")


def _check_payload(report):
    status = "skipped" if report.skipped else ("pass" if report.ok else "fail")
    return {
        "name": report.name,
        "status": status,
        "checked": report.checked,
        "violations": list(report.violations),
        "skipped_reason": report.skipped,
        "params": report.params,
    }


def _skipped_check(name, reason):
    return {
        "name": name,
        "status": "skipped",
        "checked": 0,
        "violations": [],
        "skipped_reason": reason,
        "params": {},
    }


def cmd_lemmas(args):
    group, name = load_group(args.group, order_cap=args.max_order, p=args.p)
    times = {}
    ctx = AlgebraContext(group)
    t0 = time.perf_counter()
    chain, t_lower = lower_lie_chain(ctx)
    times["lower_chain"] = time.perf_counter() - t0

    checks = []
    t0 = time.perf_counter()
    checks.append(
        _check_payload(
            check_product_weight_facts(
                ctx, chain, samples=args.samples, seed=args.seed
            )
        )
    )
    checks.append(_check_payload(check_weight3_power_containments(ctx, chain)))
    checks.append(
        _check_payload(
            check_triple_commutator_shift(
                ctx, chain, samples=args.samples, seed=args.seed
            )
        )
    )
    if group.p == 2:
        checks.append(
            _skipped_check(
                "quadruple-commutator-square", "requires 2 invertible (p != 2)"
            )
        )
    else:
        checks.append(
            _check_payload(
                check_quadruple_commutator_square(
                    ctx, chain, samples=args.samples, seed=args.seed
                )
            )
        )
    times["containments"] = time.perf_counter() - t0

    rank_report = rank_weight_bound(group, t_lower)
    derived_report = lower_bound_from_derived(group, t_lower=t_lower)
    bounds = {
        "rank_weight": _bound_payload(rank_report),
        "derived_subgroup": _bound_payload(derived_report),
    }
    failed = any(c["status"] == "fail" for c in checks)
    for rep in (rank_report, derived_report):
        if rep.applicable and rep.holds is False:
            failed = True

    payload = {
        "kind": "lemmas",
        "group": _group_info(group, name),
        "t_lower": t_lower,
        "checks": checks,
        "bounds": bounds,
        "params": {"samples": args.samples, "seed": args.seed},
    }
    return payload, times, 1 if failed else 0


def _render_lemmas(payload, out):
    info = payload["group"]
    out.write(
        f"group {info['name']}: order {info['order']}, p = {info['p']}, "
        f"t_lower = {payload['t_lower']}\n"
    )
    for check in payload["checks"]:
        line = f"[{check['status']}] {check['name']}: {check['checked']} checks"
        if check["violations"]:
            line += f", {len(check['violations'])} violations"
        if check["skipped_reason"]:
            line += f" ({check['skipped_reason']})"
        out.write(line + "\n")
        for violation in check["violations"][:5]:
            out.write(f"    violation: {violation}\n")
    for key, bound in payload["bounds"].items():
        if not bound["applicable"]:
            out.write(f"[skipped] {bound['name']}: {bound.get('reason', '')}\n")
        else:
            mark = "pass" if bound["holds"] else "FAIL"
            out.write(f"[{mark}] {bound['name']}: {bound.get('details', {})}\n")


def scan_k_values(p):
    return sorted({p + 1, 2 * p, 3 * p - 1, 4 * p - 2, 5 * p - 3, 6 * p - 4})


def cmd_scan(args):
    p = args.p
    if p is None:
        raise InputError("scan requires --p")
    max_order = args.max_order or DEFAULT_SCAN_CAPS.get(p, 243)
    entries = [e for e in builtin_catalog() if e.presentation.p == p]
    times = {}
    rows = []
    t0 = time.perf_counter()
    for entry in entries:
        group = entry.build()
        if group.order > max_order:
            continue
        series = lower_central_series(group)
        dchain = dimension_subgroup_chain(group)
        t_closed = upper_index_closed_form(dchain.d, p)
        row = {
            "name": entry.name,
            "order": group.order,
            "derived_order": series[1].order,
            "class": len(series) - 1,
            "t_upper_closed_form": t_closed,
            "t_lower": None,
            "t_upper_bruteforce": None,
            "agreement": None,
        }
        if not args.formula_only:
            ctx = AlgebraContext(group)
            _, t_lower = lower_lie_chain(ctx)
            _, t_upper = upper_lie_chain(ctx)
            row["t_lower"] = t_lower
            row["t_upper_bruteforce"] = t_upper
            row["agreement"] = t_upper == t_closed
        rows.append(row)
    times["rows"] = time.perf_counter() - t0

    k_values = scan_k_values(p)
    biconditionals = {}
    verdict_ok = True
    for k in k_values:
        lower_set = sorted(r["name"] for r in rows if r["t_lower"] == k)
        upper_set = sorted(
            r["name"]
            for r in rows
            if (r["t_upper_bruteforce"] or r["t_upper_closed_form"]) == k
        )
        equal = lower_set == upper_set if not args.formula_only else None
        if equal is False:
            verdict_ok = False
        biconditionals[str(k)] = {
            "lower_set": lower_set,
            "upper_set": upper_set,
            "equal": equal,
        }
    forbidden = None
    if p == 3:
        forbidden = {
            "11": sorted(r["name"] for r in rows if r["t_lower"] == 11),
            "13": sorted(r["name"] for r in rows if r["t_lower"] == 13),
        }
        if forbidden["11"] or forbidden["13"]:
            verdict_ok = False
    t_equal = None
    if p > 3 and not args.formula_only:
        t_equal = all(r["t_lower"] == r["t_upper_bruteforce"] for r in rows)
        if not t_equal:
            verdict_ok = False
    if not args.formula_only:
        if not all(r["agreement"] for r in rows):
            verdict_ok = False

    payload = {
        "kind": "scan",
        "p": p,
        "max_order": max_order,
        "k_values": k_values,
        "rows": rows,
        "biconditionals": biconditionals,
        "forbidden_lower_indices": forbidden,
        "t_equal_everywhere": t_equal,
        "params": {
            "formula_only": args.formula_only,
            "samples": args.samples,
            "seed": args.seed,
        },
    }
    return payload, times, 0 if verdict_ok else 1


def _render_scan(payload, out):
    out.write(
        f"scan p = {payload['p']} (catalog order cap {payload['max_order']}), "
        f"checked indices {payload['k_values']}\n"
    )
    out.write(
        f"{'group':<16}{'order':>7}{'|G_c|':>6}{'cls':>5}{'t_L':>5}{'t^L':>5}{'closed':>8}\n"
    )
    for row in payload["rows"]:
        out.write(
            f"{row['name']:<16}{row['order']:>7}{row['derived_order']:>6}"
            f"{row['class']:>5}"
            f"{row['t_lower'] if row['t_lower'] is not None else '-':>5}"
            f"{row['t_upper_bruteforce'] if row['t_upper_bruteforce'] is not None else '-':>5}"
            f"{row['t_upper_closed_form']:>8}\n"
        )
    for k, bic in payload["biconditionals"].items():
        status = {True: "pass", False: "FAIL", None: "n/a"}[bic["equal"]]
        out.write(
            f"[{status}] k = {k}: lower {bic['lower_set']} vs upper {bic['upper_set']}\n"
        )
    if payload["forbidden_lower_indices"] is not None:
        for k, names in payload["forbidden_lower_indices"].items():
            status = "pass" if not names else "FAIL"
            out.write(f"[{status}] no group with t_lower = {k}: {names}\n")
    if payload["t_equal_everywhere"] is not None:
        status = "pass" if payload["t_equal_everywhere"] else "FAIL"
        out.write(f"[{status}] t_lower = t_upper on every row\n")


_RENDERERS = {
    "indices": _render_indices,
    "series": _render_series,
    "lemmas": _render_lemmas,
    "scan": _render_scan,
}


def emit(payload, times, fmt, out):
    if fmt == "json":
        document = {
            "payload": payload,
            "envelope": {
                "tool": "lienil",
                "version": __version__,
                "kernel_backend": backend_name,
                "timestamp": _now(),
                "wall_times": {k: round(v, 6) for k, v in times.items()},
            },
        }
        out.write(json.dumps(document, sort_keys=True, indent=2) + "\n")
    else:
        _RENDERERS[payload["kind"]](payload, out)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lienil",
        description=(
            "Lie nilpotency indices of modular group algebras KG over GF(p): "
            "brute-force chains, closed forms, and containment checks."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, group_required=True):
        if group_required:
            sp.add_argument(
                "--group",
                required=True,
                help="catalog name or path to a presentation/Cayley file",
            )
        sp.add_argument("--p", type=int, default=None, help="prime (Cayley input / scan)")
        sp.add_argument(
            "--format", choices=("text", "json"), default="text", dest="format"
        )
        sp.add_argument(
            "--max-order",
            type=int,
            default=None,
            help="order cap (build cap; for scan: catalog filter)",
        )
        sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument(
            "--formula-only",
            action="store_true",
            help="skip brute-force chains; oracle agreement reported as not checked",
        )

    sp = sub.add_parser("indices", help="all indices and verdicts for one group")
    common(sp)
    sp.add_argument(
        "--aug",
        action="store_true",
        help="force the augmentation-power chain (default: abelian groups only)",
    )
    sp.set_defaults(func=cmd_indices)

    sp = sub.add_parser("series", help="lower central and dimension subgroup series")
    common(sp)
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("lemmas", help="containment and bound check suite")
    common(sp)
    sp.set_defaults(func=cmd_lemmas)

    sp = sub.add_parser("scan", help="catalog-wide index scan for one prime")
    common(sp, group_required=False)
    sp.set_defaults(func=cmd_scan)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_order", None) is None and args.command != "scan":
        args.max_order = DEFAULT_ORDER_CAP
    try:
        payload, times, code = args.func(args)
    except (InputError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LienilError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    emit(payload, times, args.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
