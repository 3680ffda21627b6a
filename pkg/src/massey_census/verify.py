"""Self-check suites: every headline count recomputed two independent ways,
with one table row per check.  The desk suite runs in seconds; the extended
suite adds the multi-million-assignment oracle confirmations."""

from __future__ import annotations

import time

from .census import (
    GroupModel,
    cp_count,
    epi_count,
    nu_extensions,
    nu_local_closed,
    preset_model,
    tmp_closed,
    tmp_enumerate,
    un_quotient_decision,
    z1_closed,
)
from .fp import FpVector
from .oracle import (
    ORACLE_BUDGET_EXTENDED,
    count_epi_bruteforce,
    count_lifts_bruteforce,
    massey_system_exists,
)
from .words import demushkin_presentation, free_presentation, preset

SUITES = ("desk", "extended")


def _row(name, ok, detail, exploratory=False, ms=0):
    return {
        "name": name,
        "ok": bool(ok),
        "exploratory": bool(exploratory),
        "detail": detail,
        "ms": ms,
    }


def _run(rows, name, fn, exploratory=False):
    t0 = time.monotonic()
    try:
        ok, detail = fn()
    except Exception as exc:  # surface, never hide, a broken check
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    rows.append(_row(name, ok, detail, exploratory,
                     int((time.monotonic() - t0) * 1000)))


def _check_eq(label, *values):
    first = values[0]
    ok = all(v == first for v in values)
    return ok, f"{label}: " + (" = ".join(str(v) for v in values)
                               if ok else f"MISMATCH {values}")


# --- individual checks --------------------------------------------------------


def _local_q2_degree1():
    model = GroupModel.demushkin(3, 2)
    return _check_eq(
        "nu(U_4) at degree 1, q=2",
        nu_local_closed(1, 2, 2, 4),
        nu_extensions(model, 2).nu,
        16,
    )


def _oracle_d2_variants(threads):
    counts = [
        count_epi_bruteforce(demushkin_presentation(3, 2, 2, "D2", f=f), 4, 2,
                             threads=threads)
        for f in (2, "inf")
    ]
    return _check_eq("epi(U_4) one-relator d=3 q=2, f in {2, inf}",
                     counts[0], counts[1], 6144)


def _borromean():
    model = preset_model("borromean")
    tmp = tmp_enumerate(model, 2)[0]
    formula = epi_count(model, 2).epi
    brute = count_epi_bruteforce(preset("borromean"), 4, 2)
    nu = nu_extensions(model, 2).nu
    ok = (tmp, formula, brute, nu) == (6, 3072, 3072, 8)
    return ok, f"triples {tmp}, epi {formula}/{brute}, nu {nu}"


def _ram01():
    model = preset_model("ram01")
    nu = nu_extensions(model, 2).nu
    brute = count_epi_bruteforce(preset("ram01"), 4, 2)
    ok = (nu, brute) == (224, 86016)
    return ok, f"nu {nu}, oracle epi {brute}"


def _closed_grid():
    cells = [
        (GroupModel.demushkin(3, 2), 2),
        (GroupModel.demushkin(4, 2, case="D3"), 2),
        (GroupModel.demushkin(4, 2, case="D4"), 2),
        (GroupModel.demushkin(4, 4), 2),
        (GroupModel.demushkin(4, 3), 3),
        (GroupModel.demushkin(4, 9), 3),
        (GroupModel.demushkin(4, 5), 5),
        (GroupModel.df(3, 2, 1), 2),
        (GroupModel.df(3, 2, 2), 2),
        (GroupModel.dd(2, 4, 2, 4), 2),
    ]
    bad = []
    for model, p in cells:
        closed = tmp_closed(model, p)
        scanned = tmp_enumerate(model, p)[0]
        if closed != scanned:
            bad.append(f"{model.describe()} p={p}: {closed} != {scanned}")
    # d=3 with q != 2 admits no model at any p: the grid cell is vacuous
    try:
        GroupModel.demushkin(3, 3)
        bad.append("rank-3 q=3 model unexpectedly constructible")
    except ValueError:
        pass
    if bad:
        return False, "; ".join(bad)
    return True, f"{len(cells)} cells closed = scan, odd-rank q!=2 vacuous"


def _lifts_small():
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    model = GroupModel.demushkin(3, 2)
    _, triples = tmp_enumerate(model, 2, want_list=True)
    lift_counts = {count_lifts_bruteforce(pres, 2, t) for t in triples}
    want = z1_closed(model, 2, "noncentral")
    if lift_counts != {want}:
        return False, f"one-relator d=3 lifts {lift_counts} != {want}"

    free3 = free_presentation(3)
    _, ftriples = tmp_enumerate(GroupModel.free(3), 2, want_list=True)
    got = count_lifts_bruteforce(free3, 2, ftriples[0])
    if got != 512:
        return False, f"free lift count {got} != 512"

    _, ftriples3 = tmp_enumerate(GroupModel.free(3), 3, want_list=True)
    got3 = count_lifts_bruteforce(free_presentation(3), 3, ftriples3[0])
    if got3 != 3 ** 9:
        return False, f"free lift count over F_3 {got3} != {3 ** 9}"

    bad = count_lifts_bruteforce(
        pres, 2,
        (FpVector((1, 0, 0), 2), FpVector((0, 1, 0), 2), FpVector((0, 0, 1), 2)),
    )
    if bad != 0:
        return False, f"off-condition triple lifted {bad} times"
    return True, "d=3 lifts = cocycle counts; free = |M|^d; off-condition = 0"


def _u3_pathway():
    model = GroupModel.demushkin(3, 2)
    cp = cp_count(model, 2)
    nu3 = nu_extensions(model, 2, target=3).nu
    nu3_local = nu_local_closed(1, 2, 2, 3)
    brute = count_epi_bruteforce(
        demushkin_presentation(3, 2, 2, "D2", f="inf"), 3, 2
    )
    nu2 = nu_extensions(model, 2, target=2).nu
    ok = (cp, nu3, nu3_local, brute, nu2) == (18, 18, 18, 144, 7)
    return ok, f"cp {cp}, nu(U_3) {nu3}={nu3_local}, oracle {brute}, nu(U_2) {nu2}"


def _counterexample():
    pres = preset("counterexample1")
    chars = [
        FpVector(tuple(1 if j == i else 0 for j in range(4)), 2)
        for i in range(4)
    ]
    # all consecutive cup products vanish (the pairing here is zero), yet
    # no defining system exists in the 2^20-assignment search space
    exists = massey_system_exists(pres, chars, 2, budget=2 ** 20)
    return exists is False, f"4-fold system exists: {exists}"


def _quotient_ladder():
    model = GroupModel.demushkin(3, 2)
    ladder = [un_quotient_decision(model, n) for n in (2, 3, 4, 5, 6)]
    if ladder != [True, True, True, False, False]:
        return False, f"degree-1 ladder wrong: {ladder}"
    for d in (1, 2, 3, 4):
        free = GroupModel.free(d)
        for n in (2, 3, 4, 5, 6):
            if un_quotient_decision(free, n) != (n <= d + 1):
                return False, f"free({d}) vs n={n} inconsistent"
    none = count_epi_bruteforce(free_presentation(1), 3, 2)
    some = count_epi_bruteforce(free_presentation(2), 3, 2)
    ok = none == 0 and some > 0
    return ok, f"rank-1 has 0 U_3 images, rank-2 has {some}"


def _determinism(threads):
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    serial = count_epi_bruteforce(pres, 4, 2)
    threaded = count_epi_bruteforce(pres, 4, 2, threads=max(threads, 2),
                                    chunk=2 ** 14)
    tmp1 = tmp_enumerate(GroupModel.demushkin(4, 3), 3, threads=1)[0]
    tmp2 = tmp_enumerate(GroupModel.demushkin(4, 3), 3, threads=2)[0]
    ok = serial == threaded == 6144 and tmp1 == tmp2 == 34560
    return ok, f"oracle {serial}/{threaded}, scan {tmp1}/{tmp2}"


def _d1_oracle(threads):
    model = GroupModel.demushkin(4, 4)
    formula = epi_count(model, 2).epi
    brute = count_epi_bruteforce(
        demushkin_presentation(4, 2, 4, "D1"), 4, 2, threads=threads
    )
    nu = nu_extensions(model, 2).nu
    nu_local = nu_local_closed(2, 2, 4, 4)
    ok = formula == brute == 737280 and nu == nu_local == 1920
    return ok, f"epi {formula}/{brute}, nu {nu}={nu_local}"


def _lifts_rank4(threads):
    details = []
    for case, q in (("D1", 4), ("D3", 2), ("D4", 2)):
        model = GroupModel.demushkin(4, q, case=case)
        pres = demushkin_presentation(4, 2, q, case,
                                      f=None if case == "D1" else
                                      ("inf" if case == "D3" else 2))
        count, triples = tmp_enumerate(model, 2, want_list=True)
        want = z1_closed(model, 2, "noncentral")
        lift_counts = {count_lifts_bruteforce(pres, 2, t) for t in triples}
        if lift_counts != {want}:
            return False, f"{case}: lifts {lift_counts} != {want}"
        total = count * want
        brute = count_epi_bruteforce(pres, 4, 2, threads=threads)
        if total != brute:
            return False, f"{case}: sum {total} != oracle {brute}"
        details.append(f"{case}: {count}x{want}={brute}")
    return True, "; ".join(details)


def _sum_identity_d3():
    pres = demushkin_presentation(3, 2, 2, "D2", f="inf")
    _, triples = tmp_enumerate(GroupModel.demushkin(3, 2), 2, want_list=True)
    total = sum(count_lifts_bruteforce(pres, 2, t) for t in triples)
    brute = count_epi_bruteforce(pres, 4, 2)
    return total == brute, f"sum of lifts {total}, oracle {brute}"


def _df_oracle(threads):
    model = GroupModel.df(3, 2, 1)
    formula = epi_count(model, 2).epi
    from .census import model_presentation

    brute = count_epi_bruteforce(model_presentation(model, 2), 4, 2,
                                 threads=threads)
    ok = formula == brute == 1327104
    return ok, f"formula {formula}, oracle {brute}"


def _dd_exploratory(threads):
    model = GroupModel.dd(2, 4, 2, 4)
    formula = epi_count(model, 2).epi
    from .census import model_presentation

    brute = count_epi_bruteforce(model_presentation(model, 2), 4, 2,
                                 threads=threads)
    verdict = "match" if formula == brute else "MISMATCH"
    # rank-2 factors sit outside the stated rank >= 3 hypothesis: this row
    # reports, and a mismatch is a finding rather than a failure
    return True, f"{verdict}: formula {formula}, oracle {brute} (exploratory)"


def _free_rank2_u4_vanishes():
    model = GroupModel.free(2)
    formula = epi_count(model, 3).epi
    brute = count_epi_bruteforce(free_presentation(2), 4, 3,
                                 budget=ORACLE_BUDGET_EXTENDED)
    ok = formula == brute == 0
    return ok, f"rank 2 onto U_4(F_3): formula {formula}, oracle {brute}"


def run_suite(suite: str = "desk", threads: int = 1) -> list:
    """Run the named suite and return its table rows."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    threads = max(1, int(threads))
    rows = []
    _run(rows, "local-field degree 1 (q=2): nu(U_4) = 16", _local_q2_degree1)
    _run(rows, "oracle d=3 q=2 relator variants agree",
         lambda: _oracle_d2_variants(threads))
    _run(rows, "borromean preset: 6 triples, epi 3072, nu 8", _borromean)
    _run(rows, "three-generator free preset: nu 224", _ram01)
    _run(rows, "closed triple counts = scans on the grid", _closed_grid)
    _run(rows, "lift counts = cocycle counts (rank 3, free)", _lifts_small)
    _run(rows, "U_3/U_2 pathway: 18 and 7", _u3_pathway)
    _run(rows, "4-fold system absent for the rank-4 counterexample",
         _counterexample)
    _run(rows, "quotient ladder matches surjection feasibility",
         _quotient_ladder)
    _run(rows, "serial = threaded counts", lambda: _determinism(threads))
    _run(rows, "sum of lifts = oracle (rank 3)", _sum_identity_d3)
    if suite == "extended":
        _run(rows, "rank-4 symplectic oracle: epi 737280, nu 1920",
             lambda: _d1_oracle(threads))
        _run(rows, "rank-4 lifts constant; sums = oracle",
             lambda: _lifts_rank4(threads))
        _run(rows, "product with free factor: formula = oracle 1327104",
             lambda: _df_oracle(threads))
        _run(rows, "rank-2 double product vs oracle",
             lambda: _dd_exploratory(threads), exploratory=True)
        _run(rows, "rank 2 has no U_4 surjections (formula = oracle = 0)",
             _free_rank2_u4_vanishes)
    return rows


def suite_passed(rows) -> bool:
    return all(r["ok"] for r in rows if not r["exploratory"])


def format_table(rows) -> str:
    lines = []
    width = max(len(r["name"]) for r in rows)
    for r in rows:
        mark = "ok " if r["ok"] else "FAIL"
        if r["exploratory"]:
            mark = "expl"
        lines.append(
            f"[{mark}] {r['name']:<{width}}  {r['detail']} ({r['ms']} ms)"
        )
    good = sum(1 for r in rows if r["ok"] and not r["exploratory"])
    total = sum(1 for r in rows if not r["exploratory"])
    expl = sum(1 for r in rows if r["exploratory"])
    summary = f"{good}/{total} checks passed"
    if expl:
        summary += f", {expl} exploratory"
    lines.append(summary)
    return "\n".join(lines)
