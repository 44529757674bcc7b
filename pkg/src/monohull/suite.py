"""One-shot consistency checks for a single instance."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

from .core import Instance
from .hull import closed_form_slack, facet_system_cn1, vertex_slacks, vertices
from .optimize import (
    brute_force_optimize,
    build_certificate,
    primal_solve,
    random_objective,
    verify_certificate,
)
from .volume import separation_check_v2, volume_by_decomposition, volume_cn1


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str
    skipped: bool = False


def check_vertex_validity(inst: Instance) -> SuiteResult:
    sys = facet_system_cn1(inst)
    verts = vertices(inst)
    bad = 0
    for r, slacks in zip(sys.rows, vertex_slacks(sys)):
        for v, s in zip(verts, slacks):
            if s < 0 or s != closed_form_slack(inst, r, v):
                bad += 1
    total = len(sys.rows) << inst.n
    return SuiteResult("vertex_validity", bad == 0, f"{total - bad}/{total} row-vertex slacks match")


def check_strong_duality(inst: Instance, objectives: int, seed: int) -> SuiteResult:
    rng = random.Random(seed)
    cases: Counter = Counter()
    failures = 0
    certify = inst.a_n > 0
    for _ in range(objectives):
        obj = random_objective(rng, inst.n)
        res = primal_solve(inst, obj)
        if res.z_star != brute_force_optimize(inst, obj).z_star:
            failures += 1
            continue
        if certify:
            cert = build_certificate(inst, obj, res)
            cases[cert.case_tag] += 1
            if not verify_certificate(inst, obj, cert, res).passed:
                failures += 1
    tags = " ".join(f"{k}={cases[k]}" for k in sorted(cases))
    detail = f"{objectives - failures}/{objectives} objectives ok"
    if certify:
        detail += f" [{tags}]"
    else:
        detail += " (primal only; certificates need a_n > 0)"
    return SuiteResult("strong_duality", failures == 0, detail)


def check_decomposition(inst: Instance) -> SuiteResult:
    total = volume_by_decomposition(inst).total
    closed = volume_cn1(inst)
    return SuiteResult("volume_identity", total == closed, f"decomposition {total} vs closed form {closed}")


def check_separation(inst: Instance) -> SuiteResult:
    if inst.a_n == 0:
        return SuiteResult("separation_count", True, "skipped: needs a_n > 0", skipped=True)
    rows = separation_check_v2(inst)
    sep = [r.row for r in rows if r.separates]
    expected = [f"lift_x_lower[{i}]" for i in range(1, inst.n)] + ["lift_xn_upper"]
    ok = len(sep) == inst.n and sep == expected
    return SuiteResult("separation_count", ok, f"{len(sep)} separating rows (n={inst.n})")


def run_suite(inst: Instance, objectives: int = 100, seed: int = 0) -> list[SuiteResult]:
    return [
        check_vertex_validity(inst),
        check_strong_duality(inst, objectives, seed),
        check_decomposition(inst),
        check_separation(inst),
    ]
