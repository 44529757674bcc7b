"""Command-line interface.

Exit codes: 0 ok, 1 a check failed (``volume --check``, ``verify``),
2 malformed input, 3 certificate requested with a_n = 0,
4 a certificate residual is nonzero.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .core import Instance, InvalidInstance, Unsupported, fmt, parse_rational, parse_vector
from .hull import facet_system_cn0, facet_system_cn1, facet_system_mccormick, membership, vertices
from .optimize import Objective, build_certificate, primal_solve, verify_certificate
from .serialize import (
    SCHEMA_VERSION,
    certificate_to_dict,
    dumps,
    result_to_dict,
    system_to_dict,
    system_to_text,
    verification_to_dict,
    vertex_to_dict,
    volume_to_dict,
)
from .suite import run_suite
from .volume import volume_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_RESIDUAL = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("MONOHULL_SEED")
    return int(raw) if raw not in (None, "") else 0


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-n", type=int, help="number of variables (>= 2)")
    p.add_argument("--an", help="lower bound of x_n (rational, default 0)")
    p.add_argument("--b", help="upper bounds b1,...,bn")
    p.add_argument("--instance", help="JSON file with keys n, an, b")
    p.add_argument("--format", choices=("human", "json"), default="human")


def _load_instance(args) -> Instance:
    data: dict = {}
    if args.instance:
        try:
            with open(args.instance) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read instance file: {exc}") from exc
    n = args.n if args.n is not None else data.get("n")
    an = args.an if args.an is not None else data.get("an", "0")
    b = args.b if args.b is not None else data.get("b")
    if n is None or b is None:
        raise InputError("instance needs -n and --b (or --instance FILE)")
    try:
        return Instance(int(n), parse_rational(an), parse_vector(b))
    except (InvalidInstance, ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def _emit(args, doc: dict, human: str) -> None:
    if args.format == "json":
        sys.stdout.write(dumps(doc))
    else:
        sys.stdout.write(human if human.endswith("\n") else human + "\n")


def cmd_facets(args) -> int:
    if args.kind == "mccormick":
        try:
            a, b = parse_vector(args.a or ""), parse_vector(args.b or "")
            if len(a) != 2 or len(b) != 2:
                raise ValueError("mccormick needs --a a1,a2 and --b b1,b2")
            system = facet_system_mccormick(a, b)
        except (ValueError, InvalidInstance) as exc:
            raise InputError(str(exc)) from exc
    else:
        inst = _load_instance(args)
        system = facet_system_cn1(inst) if args.kind == "cn1" else facet_system_cn0(inst)
    _emit(args, system_to_dict(system), system_to_text(system))
    return EXIT_OK


def cmd_vertices(args) -> int:
    inst = _load_instance(args)
    vs = vertices(inst)
    doc = {"schema_version": SCHEMA_VERSION, "type": "vertices", "instance": inst.to_dict(),
           "vertices": [vertex_to_dict(v) for v in vs]}
    lines = [
        f"T={sorted(v.T)} xn={v.xn_choice}: x=({', '.join(map(fmt, v.x))}) y={fmt(v.y)}" for v in vs
    ]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_membership(args) -> int:
    inst = _load_instance(args)
    try:
        pt = parse_vector(args.point)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if len(pt) != inst.n + 1:
        raise InputError(f"--point needs n+1 = {inst.n + 1} coordinates (x1..xn, y)")
    system = facet_system_cn1(inst)
    verdict, violated = membership(system, pt[:-1], pt[-1])
    labels = [system.rows[r].label for r in violated]
    doc = {"schema_version": SCHEMA_VERSION, "type": "membership", "instance": inst.to_dict(),
           "point": [fmt(q) for q in pt], "verdict": verdict, "violated": labels}
    human = verdict + (f" (violated: {', '.join(labels)})" if labels else "")
    _emit(args, doc, human)
    return EXIT_OK


def _load_objective(args, inst: Instance) -> Objective:
    if args.c0 is None or args.c is None:
        raise InputError("objective needs --c0 and --c")
    try:
        obj = Objective(parse_rational(args.c0), parse_vector(args.c))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    if len(obj.c) != inst.n:
        raise InputError(f"--c needs {inst.n} coefficients")
    return obj


def cmd_optimize(args) -> int:
    inst = _load_instance(args)
    obj = _load_objective(args, inst)
    res = primal_solve(inst, obj)
    doc = {"schema_version": SCHEMA_VERSION, "type": "optimize", "instance": inst.to_dict(),
           "objective": {"c0": fmt(obj.c0), "c": [fmt(q) for q in obj.c]},
           "result": result_to_dict(res)}
    v = res.vertex
    lines = [
        f"winner: {res.winner}",
        f"vertex: x=({', '.join(map(fmt, v.x))}) y={fmt(v.y)}",
        f"z*: {fmt(res.z_star)}",
    ]
    code = EXIT_OK
    if args.certify:
        if inst.a_n == 0:
            print("error: dual certificates require a_n > 0", file=sys.stderr)
            return EXIT_UNSUPPORTED
        cert = build_certificate(inst, obj, res)
        rep = verify_certificate(inst, obj, cert, res)
        doc["certificate"] = certificate_to_dict(cert)
        doc["verification"] = verification_to_dict(rep)
        lines.append(f"certificate: {cert.case_tag}" + (f" (ell={cert.ell})" if cert.ell else ""))
        lines += [f"  {k} = {fmt(q)}" for k, q in cert.variables().items() if q]
        lines += [f"  check {ch.name}: {'pass' if ch.passed else 'FAIL'} residual={fmt(ch.residual)}"
                  for ch in rep.checks]
        if not rep.passed:
            code = EXIT_RESIDUAL
    _emit(args, doc, "\n".join(lines))
    return code


def cmd_volume(args) -> int:
    inst = _load_instance(args)
    seed = _default_seed() if args.seed is None else args.seed
    if args.mc_samples < 0:
        raise InputError("--mc-samples must be >= 0")
    if args.shards < 1:
        raise InputError("--shards must be >= 1")
    rep = volume_report(inst, args.mc_samples, seed, args.shards)
    d = rep.decomposition
    lines = [
        f"closed form: {fmt(rep.closed_form)}",
        f"decomposition: Q={fmt(d.vol_Q)} + (n-1)*Fi={fmt(d.cone_Fi_total)} + F={fmt(d.cone_F)}"
        f" = {fmt(d.total)}",
        f"  base B={fmt(d.vol_B)}  prism={fmt(d.vol_Pn)}  Fi each={fmt(d.cone_Fi_each)}",
        f"consistent: {rep.consistent}",
    ]
    if rep.monte_carlo is not None:
        mc = rep.monte_carlo
        lines.append(f"monte carlo: {mc.estimate:.6g} +/- {mc.std_error:.3g} "
                     f"({mc.samples} samples, seed {mc.seed})")
    _emit(args, volume_to_dict(inst, rep), "\n".join(lines))
    if args.check and not rep.consistent:
        print("error: decomposition differs from closed form", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load_instance(args)
    seed = _default_seed() if args.seed is None else args.seed
    if args.objectives < 0:
        raise InputError("--objectives must be >= 0")
    results = run_suite(inst, args.objectives, seed)
    ok = all(r.passed for r in results)
    doc = {"schema_version": SCHEMA_VERSION, "type": "verify", "instance": inst.to_dict(),
           "passed": ok,
           "checks": [{"name": r.name, "passed": r.passed, "skipped": r.skipped, "detail": r.detail}
                      for r in results]}
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monohull", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("facets", help="print an inequality system")
    _add_instance_args(p)
    p.add_argument("--kind", choices=("cn1", "cn0", "mccormick"), default="cn1")
    p.add_argument("--a", help="mccormick lower bounds a1,a2")
    p.set_defaults(func=cmd_facets)

    p = sub.add_parser("vertices", help="list the 2^n extreme points")
    _add_instance_args(p)
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("membership", help="classify a point against the hull")
    _add_instance_args(p)
    p.add_argument("--point", required=True, help="x1,...,xn,y")
    p.set_defaults(func=cmd_membership)

    for name in ("optimize", "certify"):
        p = sub.add_parser(name, help="maximize c0*y + c.x over the hull")
        _add_instance_args(p)
        p.add_argument("--c0")
        p.add_argument("--c", help="c1,...,cn")
        if name == "optimize":
            p.add_argument("--certify", action="store_true", help="also build and verify the dual certificate")
        else:
            p.set_defaults(certify=True)
        p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("volume", help="exact volume and its decomposition")
    _add_instance_args(p)
    p.add_argument("--mc-samples", type=int, default=0)
    p.add_argument("--seed", type=int)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--check", action="store_true", help="fail unless decomposition equals closed form")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("verify", help="run the consistency suite on one instance")
    _add_instance_args(p)
    p.add_argument("--objectives", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Unsupported as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
