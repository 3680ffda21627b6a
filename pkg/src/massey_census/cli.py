"""Command-line front end: census counts, extension counts, triple scans,
cocycle counts, defining-system searches, and the self-check suites."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import census, oracle, verify
from .census import (
    CensusReport,
    GroupModel,
    epi_count,
    local_field_model,
    model_presentation,
    nu_extensions,
    nu_local_closed,
    preset_model,
    reports_to_csv,
    tmp_enumerate,
    z1_closed,
)
from .fp import BudgetError, FpVector
from .forms import load_input_file
from .unipotent import aut_order
from .words import (
    Presentation,
    RamifiedRelatorData,
    demushkin_presentation,
    preset,
    ramified_presentation,
)

CONFIG_KEYS = ("threads", "tmp_budget", "oracle_budget", "lift_budget")


def _parse_q(text):
    if text in ("inf", "0"):
        return "inf"
    return int(text)


def _parse_f(text):
    if text == "inf":
        return "inf"
    return int(text)


def _add_model_flags(sub):
    sub.add_argument("--model", required=True,
                     choices=["demushkin", "free", "df", "dd", "preset", "file"])
    sub.add_argument("--d", type=int, help="rank of the (first) factor")
    sub.add_argument("--q", type=_parse_q, help="q invariant (integer or 'inf')")
    sub.add_argument("--case", choices=["D1", "D2", "D3", "D4"])
    sub.add_argument("--f", type=_parse_f,
                     help="secondary exponent for the q=2 relators (or 'inf')")
    sub.add_argument("--e", type=int, help="free-factor rank for --model df")
    sub.add_argument("--d2", type=int, help="second factor rank for --model dd")
    sub.add_argument("--q2", type=_parse_q, help="second factor q for --model dd")
    sub.add_argument("--case2", choices=["D1", "D2", "D3", "D4"])
    sub.add_argument("--name", help="preset name for --model preset")
    sub.add_argument("--file", help="input file for --model file")


def _add_common_flags(sub):
    sub.add_argument("--p", type=int, required=True, help="the prime")
    sub.add_argument("--json", action="store_true",
                     help="machine-readable errors on stdout")
    sub.add_argument("--config", help="key=value file: budgets and threads only")
    sub.add_argument("--threads", type=int)
    sub.add_argument("--budget", type=int,
                     help="primitive-form-evaluation budget for scans")
    sub.add_argument("--oracle-budget", type=int,
                     help="assignment budget for brute-force enumeration")
    sub.add_argument("--extended", action="store_true",
                     help="raise the enumeration budget to 2^31 assignments")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="massey-census",
        description="Count surjections onto unitriangular groups and the "
                    "Galois extensions they classify.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    ce = subs.add_parser("count-epi", help="count surjections onto U_n(F_p)")
    _add_model_flags(ce)
    _add_common_flags(ce)
    ce.add_argument("--target", type=int, default=4, choices=[2, 3, 4])
    ce.add_argument("--method", default="formula",
                    choices=["formula", "oracle", "tmp-sum", "tmp_sum"])
    ce.add_argument("--csv", action="store_true", help="CSV instead of JSON")

    cx = subs.add_parser("count-extensions",
                         help="count Galois U_n(F_p)-extensions of a p-adic field")
    cx.add_argument("--local-degree", type=int, required=True,
                    help="degree of the field over Q_p")
    _add_common_flags(cx)
    cx.add_argument("--q", type=_parse_q, required=True)
    cx.add_argument("--target", type=int, default=4, choices=[2, 3, 4])
    cx.add_argument("--csv", action="store_true", help="CSV instead of JSON")

    tm = subs.add_parser("tmp", help="count (and list) the census triples")
    _add_model_flags(tm)
    _add_common_flags(tm)
    tm.add_argument("--list", action="store_true", dest="want_list")

    zz = subs.add_parser("z1", help="twisted-cocycle count for an image class")
    _add_model_flags(zz)
    _add_common_flags(zz)
    zz.add_argument("--class", dest="image_class", required=True,
                    help="central, noncentral, any, or a +-joined pair")

    ma = subs.add_parser("massey",
                         help="decide whether a defining system exists")
    _add_model_flags(ma)
    _add_common_flags(ma)
    ma.add_argument("--chars", required=True,
                    help="JSON list of characters, e.g. [[1,0,0],[0,1,0]]")
    ma.add_argument("--k", type=int, help="expected fold count (consistency)")

    ve = subs.add_parser("verify", help="run a self-check suite")
    ve.add_argument("--suite", default="desk", choices=["desk", "extended"])
    ve.add_argument("--json", action="store_true")
    ve.add_argument("--config")
    ve.add_argument("--threads", type=int)

    return parser


def _load_config(path):
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line {ln} is not key=value: {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise ValueError(
                    f"unknown config key {key!r}; only budgets and thread "
                    f"counts belong here: {', '.join(CONFIG_KEYS)}"
                )
            out[key] = int(value)
    return out


def _settings(args):
    config = _load_config(args.config) if getattr(args, "config", None) else {}
    threads = getattr(args, "threads", None)
    if threads is None:
        env = os.environ.get("MASSEY_CENSUS_THREADS")
        if env:
            threads = int(env)
    if threads is None:
        threads = config.get("threads", 1)
    tmp_budget = getattr(args, "budget", None)
    if tmp_budget is None:
        tmp_budget = config.get("tmp_budget", census.DEFAULT_TMP_BUDGET)
    oracle_budget = getattr(args, "oracle_budget", None)
    if oracle_budget is None:
        oracle_budget = config.get("oracle_budget", None)
    if oracle_budget is None:
        oracle_budget = (oracle.ORACLE_BUDGET_EXTENDED
                         if getattr(args, "extended", False)
                         else oracle.ORACLE_BUDGET)
    return {
        "threads": max(1, int(threads)),
        "tmp_budget": int(tmp_budget),
        "oracle_budget": int(oracle_budget),
        "lift_budget": int(config.get("lift_budget", oracle.LIFT_BUDGET)),
    }


def _model_from_tag(pres):
    tag = pres.tag
    kind = tag.get("kind")
    if kind == "demushkin":
        return GroupModel.demushkin(tag["d"], tag["q"], tag["case"])
    if kind == "free":
        return GroupModel.free(pres.rank)
    if kind == "free_product":
        parts = tag["parts"]
        kinds = [p.tag.get("kind") for p in parts]
        if len(parts) == 2 and kinds == ["demushkin", "free"]:
            t = parts[0].tag
            return GroupModel.df(t["d"], t["q"], parts[1].rank, t["case"])
        if len(parts) == 2 and kinds == ["demushkin", "demushkin"]:
            t1, t2 = parts[0].tag, parts[1].tag
            return GroupModel.dd(t1["d"], t1["q"], t2["d"], t2["q"],
                                 t1["case"], t2["case"])
    return None


def _build_model(args, p):
    """Resolve the model flags to (model, presentation, label); either of the
    first two may be None when the input only supports one pathway."""
    kind = args.model
    if kind == "demushkin":
        if args.d is None or args.q is None:
            raise ValueError("--model demushkin needs --d and --q")
        model = GroupModel.demushkin(args.d, args.q, args.case)
        case = model.factors[0][3]
        pres = None
        if args.f is not None:
            pres = demushkin_presentation(args.d, p, args.q, case, f=args.f)
        return model, pres, model.describe()
    if kind == "free":
        if args.d is None:
            raise ValueError("--model free needs --d")
        model = GroupModel.free(args.d)
        return model, None, model.describe()
    if kind == "df":
        if args.d is None or args.q is None or args.e is None:
            raise ValueError("--model df needs --d, --q, and --e")
        model = GroupModel.df(args.d, args.q, args.e, args.case)
        return model, None, model.describe()
    if kind == "dd":
        if None in (args.d, args.q, args.d2, args.q2):
            raise ValueError("--model dd needs --d, --q, --d2, and --q2")
        model = GroupModel.dd(args.d, args.q, args.d2, args.q2,
                              args.case, args.case2)
        return model, None, model.describe()
    if kind == "preset":
        if not args.name:
            raise ValueError("--model preset needs --name")
        return preset_model(args.name), preset(args.name), f"preset({args.name})"
    # file input: a presentation, a relator tensor, or an arithmetic table
    if not args.file:
        raise ValueError("--model file needs --file")
    loaded = load_input_file(args.file)
    if isinstance(loaded, RamifiedRelatorData):
        model = GroupModel.s3(loaded, name=os.path.basename(args.file))
        return model, ramified_presentation(loaded, p), model.describe()
    if isinstance(loaded, Presentation):
        model = _model_from_tag(loaded)
        label = model.describe() if model else f"file({os.path.basename(args.file)})"
        return model, loaded, label
    raise ValueError(f"unsupported input file content: {type(loaded).__name__}")


def _emit(args, payload):
    print(json.dumps(payload))


def _emit_error(args, message):
    if getattr(args, "json", False):
        print(json.dumps({"error": message}))
    else:
        print(f"error: {message}", file=sys.stderr)


def _oracle_report(pres, label, p, target, settings):
    t0 = time.monotonic()
    epi = oracle.count_epi_bruteforce(
        pres, target, p, budget=settings["oracle_budget"],
        threads=settings["threads"],
    )
    ms = int((time.monotonic() - t0) * 1000)
    report = CensusReport(label, p, target, epi, "oracle", ms)
    divisor = (p - 1) if target == 2 else aut_order(target, p)
    if epi % divisor:
        raise RuntimeError(
            f"internal consistency: surjection count {epi} is not divisible "
            f"by the automorphism count {divisor}"
        )
    report.nu = epi // divisor
    return report


def _cmd_count_epi(args):
    settings = _settings(args)
    p = args.p
    method = args.method.replace("-", "_")
    model, pres, label = _build_model(args, p)
    if method == "oracle":
        if pres is None:
            pres = model_presentation(model, p)
        report = _oracle_report(pres, label, p, args.target, settings)
    else:
        if model is None:
            raise ValueError(
                "this input has no structured model; use --method oracle"
            )
        report = nu_extensions(
            model, p, target=args.target, method=method,
            budget=settings["tmp_budget"], threads=settings["threads"],
        )
    if args.csv:
        print(reports_to_csv([report]), end="")
    else:
        _emit(args, report.to_json_dict())
    return 0


def _cmd_count_extensions(args):
    settings = _settings(args)
    model = local_field_model(args.local_degree, args.p, args.q)
    report = nu_extensions(model, args.p, target=args.target,
                           budget=settings["tmp_budget"],
                           threads=settings["threads"])
    closed = nu_local_closed(args.local_degree, args.p, args.q, args.target)
    if report.nu != closed:
        raise RuntimeError(
            f"internal consistency: census count {report.nu} disagrees with "
            f"the closed extension count {closed}"
        )
    if args.csv:
        print(reports_to_csv([report]), end="")
    else:
        _emit(args, report.to_json_dict())
    return 0


def _cmd_tmp(args):
    settings = _settings(args)
    model, _pres, label = _build_model(args, args.p)
    if model is None:
        raise ValueError("triple scans need a structured model input")
    count, triples = tmp_enumerate(
        model, args.p, budget=settings["tmp_budget"],
        want_list=args.want_list, threads=settings["threads"],
    )
    payload = {"model": label, "p": args.p, "tmp": str(count)}
    if args.want_list:
        payload["triples"] = [
            [[int(c) for c in v] for v in t] for t in triples
        ]
    _emit(args, payload)
    return 0


def _cmd_z1(args):
    model, _pres, label = _build_model(args, args.p)
    if model is None:
        raise ValueError("cocycle counts need a structured model input")
    cls = args.image_class.replace(",", "+")
    count = z1_closed(model, args.p, cls)
    _emit(args, {"model": label, "p": args.p, "class": cls, "z1": str(count)})
    return 0


def _cmd_massey(args):
    settings = _settings(args)
    p = args.p
    model, pres, label = _build_model(args, p)
    if pres is None:
        pres = model_presentation(model, p)
    try:
        raw = json.loads(args.chars)
    except json.JSONDecodeError as exc:
        raise ValueError(f"--chars is not valid JSON: {exc}") from exc
    if not isinstance(raw, list) or not all(isinstance(c, list) for c in raw):
        raise ValueError("--chars must be a JSON list of coordinate lists")
    chars = [FpVector(c, p) for c in raw]
    if args.k is not None and args.k != len(chars):
        raise ValueError(
            f"--k {args.k} does not match the {len(chars)} characters given"
        )
    exists = oracle.massey_system_exists(
        pres, chars, p, budget=settings["oracle_budget"]
    )
    _emit(args, {"model": label, "p": p, "k": len(chars), "exists": exists})
    return 0


def _cmd_verify(args):
    settings = _settings(args)
    rows = verify.run_suite(args.suite, threads=settings["threads"])
    if args.json:
        print(json.dumps({"suite": args.suite, "rows": rows}))
    else:
        print(verify.format_table(rows))
    return 0 if verify.suite_passed(rows) else 3


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "count-epi": _cmd_count_epi,
        "count-extensions": _cmd_count_extensions,
        "tmp": _cmd_tmp,
        "z1": _cmd_z1,
        "massey": _cmd_massey,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except BudgetError as exc:
        _emit_error(args, str(exc))
        return 2
    except (ValueError, TypeError, OSError, RuntimeError) as exc:
        _emit_error(args, str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
