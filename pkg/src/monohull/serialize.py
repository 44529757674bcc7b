"""Text and JSON encodings of systems, optimization results and volume reports.

Rationals are always written as ``"p/q"`` strings (``"p"`` when integral);
Monte Carlo figures are plain JSON floats.
"""

from __future__ import annotations

import json

from .core import Instance, fmt, parse_rational, parse_vector
from .hull import InequalitySystem, LinearInequality, Vertex
from .optimize import DualCertificate, PrimalResult, VerificationReport
from .volume import VolumeReport

SCHEMA_VERSION = 1


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def row_to_dict(r: LinearInequality) -> dict:
    return {
        "family": r.family,
        "index": r.index,
        "coef_y": fmt(r.coef_y),
        "coef_x": [fmt(a) for a in r.coef_x],
        "rhs": fmt(r.rhs),
    }


def row_from_dict(d: dict) -> LinearInequality:
    return LinearInequality(
        parse_rational(d["coef_y"]),
        parse_vector(d["coef_x"]),
        parse_rational(d["rhs"]),
        d["family"],
        d.get("index"),
    )


def system_to_dict(sys: InequalitySystem) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "type": "inequality_system",
        "kind": sys.kind,
        "instance": sys.inst.to_dict(),
        "sense": ">=",
        "rows": [row_to_dict(r) for r in sys.rows],
    }


def system_from_dict(d: dict) -> InequalitySystem:
    if d.get("type") != "inequality_system":
        raise ValueError("not an inequality_system document")
    inst = Instance.from_dict(d["instance"])
    return InequalitySystem(inst, tuple(row_from_dict(r) for r in d["rows"]), d["kind"])


def system_to_text(sys: InequalitySystem) -> str:
    """One header line, then ``family index | coef_y | coef_x... | rhs`` per row."""
    inst = sys.inst
    lines = [
        f"# kind={sys.kind} n={inst.n} an={fmt(inst.a_n)} b={','.join(fmt(v) for v in inst.b)}",
        "# family index | coef_y | coef_x[1..n] | rhs   (coef_y*y + coef_x.x >= rhs)",
    ]
    for r in sys.rows:
        idx = "-" if r.index is None else str(r.index)
        coefs = " ".join(fmt(a) for a in r.coef_x)
        lines.append(f"{r.family} {idx} | {fmt(r.coef_y)} | {coefs} | {fmt(r.rhs)}")
    return "\n".join(lines) + "\n"


def system_from_text(text: str) -> InequalitySystem:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = dict(tok.split("=", 1) for tok in lines[0].lstrip("# ").split())
    inst = Instance(int(header["n"]), parse_rational(header["an"]), parse_vector(header["b"]))
    rows = []
    for ln in lines[1:]:
        if ln.startswith("#"):
            continue
        head, cy, cx, rhs = (part.strip() for part in ln.split("|"))
        family, idx = head.split()
        rows.append(
            LinearInequality(
                parse_rational(cy),
                tuple(parse_rational(t) for t in cx.split()),
                parse_rational(rhs),
                family,
                None if idx == "-" else int(idx),
            )
        )
    return InequalitySystem(inst, tuple(rows), header["kind"])


def vertex_to_dict(v: Vertex) -> dict:
    return {
        "x": [fmt(q) for q in v.x],
        "y": fmt(v.y),
        "T": sorted(v.T),
        "xn_choice": v.xn_choice,
    }


def result_to_dict(res: PrimalResult) -> dict:
    out = {"winner": res.winner, "z_star": fmt(res.z_star), "vertex": vertex_to_dict(res.vertex)}
    if res.candidates is not None:
        out["case"] = res.candidates.case
        out["candidates"] = {k: fmt(v) for k, v in res.candidates.by_tag().items()}
    return out


def certificate_to_dict(cert: DualCertificate) -> dict:
    return {
        "case_tag": cert.case_tag,
        "ell": cert.ell,
        "u1": fmt(cert.u1),
        "u2": fmt(cert.u2),
        "s1": fmt(cert.s1),
        "s2": fmt(cert.s2),
        "v": [fmt(q) for q in cert.v],
        "w": [fmt(q) for q in cert.w],
        "t": [fmt(q) for q in cert.t],
    }


def certificate_from_dict(d: dict) -> DualCertificate:
    return DualCertificate(
        parse_rational(d["u1"]),
        parse_rational(d["u2"]),
        parse_rational(d["s1"]),
        parse_rational(d["s2"]),
        parse_vector(d["v"]),
        parse_vector(d["w"]),
        parse_vector(d["t"]),
        d["case_tag"],
        d.get("ell"),
    )


def verification_to_dict(rep: VerificationReport) -> dict:
    return {
        "passed": rep.passed,
        "dual_objective": fmt(rep.dual_objective),
        "z_star": fmt(rep.z_star),
        "checks": [
            {"name": ch.name, "passed": ch.passed, "residual": fmt(ch.residual)}
            for ch in rep.checks
        ],
    }


def volume_to_dict(inst: Instance, rep: VolumeReport) -> dict:
    d = rep.decomposition
    out = {
        "schema_version": SCHEMA_VERSION,
        "type": "volume_report",
        "instance": inst.to_dict(),
        "closed_form": fmt(rep.closed_form),
        "decomposition": {
            "vol_B": fmt(d.vol_B),
            "vol_Pn": fmt(d.vol_Pn),
            "vol_Q": fmt(d.vol_Q),
            "cone_Fi_each": fmt(d.cone_Fi_each),
            "cone_Fi_total": fmt(d.cone_Fi_total),
            "cone_F": fmt(d.cone_F),
            "total": fmt(d.total),
        },
        "consistent": rep.consistent,
        "monte_carlo": None,
    }
    if rep.monte_carlo is not None:
        mc = rep.monte_carlo
        out["monte_carlo"] = {
            "estimate": mc.estimate,
            "std_error": mc.std_error,
            "samples": mc.samples,
            "seed": mc.seed,
            "shards": mc.shards,
        }
    return out

