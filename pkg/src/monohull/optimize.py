"""Linear optimization over the hull: candidate enumeration and dual certificates.

The primal side reduces any objective to four candidate vertices.  The dual
side writes down, for whichever candidate wins, an explicit nonnegative
solution of the dual LP of the 3n+2 row system; equal objective values then
prove optimality exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .core import (
    IndexSets,
    Instance,
    InternalContradiction,
    Unsupported,
    neg,
    parse_rational,
    pos,
    split_signs,
)
from .hull import LOWER, UPPER, Vertex, vertices

__all__ = [
    "Objective",
    "CandidateValues",
    "PrimalResult",
    "DualCertificate",
    "Check",
    "VerificationReport",
    "WINNERS",
    "CASE_TAGS",
    "classify",
    "candidate_values",
    "primal_solve",
    "build_certificate",
    "verify_certificate",
    "brute_force_optimize",
    "decision_tree_case",
    "random_objective",
]

# Tie-break priority, highest first.
WINNERS = ("PiB", "PiA", "ZeroB", "ZeroA")
CASE_TAGS = ("A1", "A2a", "A2b", "A3", "A4", "B1", "B2", "B3", "B4")


@dataclass(frozen=True)
class Objective:
    """Maximize ``c0*y + sum(c[i]*x_i)``."""

    c0: Fraction
    c: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "c0", parse_rational(self.c0))
        object.__setattr__(self, "c", tuple(parse_rational(v) for v in self.c))

    def value(self, x: Sequence[Fraction], y: Fraction) -> Fraction:
        return self.c0 * y + sum((ci * xi for ci, xi in zip(self.c, x)), Fraction(0))

    def scaled(self, lam) -> "Objective":
        lam = Fraction(lam)
        return Objective(self.c0 * lam, tuple(ci * lam for ci in self.c))


def _check(inst: Instance, obj: Objective) -> None:
    if len(obj.c) != inst.n:
        raise ValueError(f"objective has {len(obj.c)} x-coefficients, instance has n={inst.n}")


@dataclass(frozen=True)
class CandidateValues:
    z_pi_b: Fraction
    z_pi_a: Fraction
    z_0_b: Fraction
    z_0_a: Fraction
    case: str

    def by_tag(self) -> dict[str, Fraction]:
        return {"PiB": self.z_pi_b, "PiA": self.z_pi_a, "ZeroB": self.z_0_b, "ZeroA": self.z_0_a}

    def winner(self) -> str:
        vals = self.by_tag()
        best = max(vals.values())
        return next(tag for tag in WINNERS if vals[tag] == best)


@dataclass(frozen=True)
class PrimalResult:
    vertex: Vertex
    z_star: Fraction
    winner: str
    candidates: CandidateValues | None = None


@dataclass(frozen=True)
class DualCertificate:
    """Dual multipliers, one per row family of the 3n+2 system.

    ``v``/``w`` are indexed by i = 1..n-1 and ``t`` by i = 1..n (stored
    0-based).  ``ell`` is the 1-based pivot index for A1, A2a and B2.
    """

    u1: Fraction
    u2: Fraction
    s1: Fraction
    s2: Fraction
    v: tuple[Fraction, ...]
    w: tuple[Fraction, ...]
    t: tuple[Fraction, ...]
    case_tag: str
    ell: int | None = None

    def scaled(self, lam) -> "DualCertificate":
        lam = Fraction(lam)
        return replace(
            self,
            u1=self.u1 * lam,
            u2=self.u2 * lam,
            s1=self.s1 * lam,
            s2=self.s2 * lam,
            v=tuple(x * lam for x in self.v),
            w=tuple(x * lam for x in self.w),
            t=tuple(x * lam for x in self.t),
        )

    def variables(self) -> dict[str, Fraction]:
        out = {"u1": self.u1, "u2": self.u2, "s1": self.s1, "s2": self.s2}
        out.update({f"v{i}": x for i, x in enumerate(self.v, start=1)})
        out.update({f"w{i}": x for i, x in enumerate(self.w, start=1)})
        out.update({f"t{i}": x for i, x in enumerate(self.t, start=1)})
        return out


def classify(inst: Instance, obj: Objective) -> IndexSets:
    _check(inst, obj)
    return split_signs(inst, obj.c)


def candidate_values(inst: Instance, obj: Objective, sets: IndexSets | None = None) -> CandidateValues:
    """Objective values of the four candidate vertices."""
    sets = classify(inst, obj) if sets is None else sets
    c0, cn = obj.c0, obj.c[-1]
    a, bn, pi = inst.a_n, inst.b_n, sets.pi
    sp, sm = sets.S_plus, sets.S_minus
    if sets.case == "A":
        ckbk = obj.c[sets.k - 1] * inst.bound(sets.k)
        return CandidateValues(
            c0 * bn * pi + cn * bn + sp,
            c0 * a * pi + cn * a + sp,
            cn * bn + sp - ckbk,
            cn * a + sp - ckbk,
            "A",
        )
    return CandidateValues(
        c0 * bn * pi + cn * bn + sp + sm,
        c0 * a * pi + cn * a + sp + sm,
        cn * bn + sp,
        cn * a + sp,
        "B",
    )


def _make_vertex(inst: Instance, zeros: set[int], upper: bool) -> Vertex:
    n = inst.n
    T = frozenset(i for i in range(1, n) if i not in zeros)
    xn = inst.b_n if upper else inst.a_n
    x = tuple(inst.bound(i) if i in T else Fraction(0) for i in range(1, n)) + (xn,)
    y = inst.pi * xn if not zeros else Fraction(0)
    return Vertex(x, y, T, UPPER if upper else LOWER)


def primal_solve(inst: Instance, obj: Objective) -> PrimalResult:
    sets = classify(inst, obj)
    cand = candidate_values(inst, obj, sets)
    winner = cand.winner()
    upper = winner.endswith("B")
    if winner.startswith("Pi"):
        zeros: set[int] = set()
    elif sets.case == "A":
        zeros = {sets.k}
    else:
        zeros = set(sets.N_minus)
    vertex = _make_vertex(inst, zeros, upper)
    z = cand.by_tag()[winner]
    if obj.value(vertex.x, vertex.y) != z:
        raise InternalContradiction(f"vertex value differs from candidate {winner}")
    return PrimalResult(vertex, z, winner, cand)


def _vertex_tag(v: Vertex) -> str:
    head = "Pi" if v.full_product else "Zero"
    return head + ("B" if v.xn_choice == UPPER else "A")


def brute_force_optimize(inst: Instance, obj: Objective) -> PrimalResult:
    """Maximize over all 2^n vertices; first vertex in enumeration order wins ties."""
    _check(inst, obj)
    best, best_val = None, None
    for v in vertices(inst):
        val = obj.value(v.x, v.y)
        if best_val is None or val > best_val:
            best, best_val = v, val
    return PrimalResult(best, best_val, _vertex_tag(best))


def decision_tree_case(inst: Instance, obj: Objective) -> str:
    """Certificate tag from pairwise comparisons stated directly in the data.

    Runs the two x_n-choice tests first, then compares the survivors; every
    test is the sign condition equivalent to one candidate difference, so this
    never touches :func:`candidate_values`.
    """
    _check(inst, obj)
    c0, c, cn = obj.c0, obj.c, obj.c[-1]
    a, bn = inst.a_n, inst.b_n
    pi = Fraction(1)
    for bi in inst.b[:-1]:
        pi *= bi
    cb = [c[i] * inst.b[i] for i in range(inst.n - 1)]
    negatives = [x for x in cb if x < 0]
    if not negatives:
        ckbk = min(cb)
        pi_side = "B" if cn + c0 * pi >= 0 else "A"
        zero_side = "B" if cn >= 0 else "A"
        if pi_side == "B" and zero_side == "B":
            pi_wins = ckbk + c0 * bn * pi >= 0
        elif pi_side == "B":
            pi_wins = c0 * bn * pi + cn * (bn - a) + ckbk >= 0
        elif zero_side == "B":
            pi_wins = ckbk + c0 * a * pi - cn * (bn - a) >= 0
        else:
            pi_wins = ckbk + c0 * a * pi >= 0
        if pi_wins:
            if pi_side == "B":
                return "A1"
            return "A2a" if c0 >= 0 else "A2b"
        return "A3" if zero_side == "B" else "A4"
    s_minus = sum(negatives, Fraction(0))
    pi_side = "B" if cn + c0 * pi >= 0 else "A"
    zero_side = "B" if cn >= 0 else "A"
    if pi_side == "B" and zero_side == "B":
        pi_wins = c0 * bn * pi + s_minus >= 0
    elif pi_side == "B":
        pi_wins = c0 * bn * pi + s_minus + cn * (bn - a) >= 0
    elif zero_side == "B":
        pi_wins = c0 * a * pi + s_minus - cn * (bn - a) >= 0
    else:
        pi_wins = c0 * a * pi + s_minus >= 0
    if pi_wins:
        return "B1" if pi_side == "B" else "B2"
    return "B3" if zero_side == "B" else "B4"


def _require(cond: bool, tag: str, what: str) -> None:
    if not cond:
        raise InternalContradiction(f"certificate {tag}: precondition {what} fails")


def build_certificate(inst: Instance, obj: Objective, result: PrimalResult | None = None) -> DualCertificate:
    """Dual solution proving optimality of the primal algorithm's vertex.

    Raises :class:`Unsupported` when a_n = 0; several constructions divide by
    a_n.
    """
    if inst.a_n == 0:
        raise Unsupported("dual certificates require a_n > 0")
    result = primal_solve(inst, obj) if result is None else result
    sets = classify(inst, obj)
    n = inst.n
    c0, c, cn = obj.c0, obj.c, obj.c[-1]
    a, bn, pi = inst.a_n, inst.b_n, sets.pi
    sp, sm = sets.S_plus, sets.S_minus
    b = inst.b
    zero = Fraction(0)
    u1 = u2 = s1 = s2 = zero
    v = [zero] * (n - 1)
    w = [zero] * (n - 1)
    t = [zero] * n
    ell = None
    winner = result.winner

    if sets.case == "A":
        k = sets.k
        ckbk = c[k - 1] * b[k - 1]
        if winner == "PiB":
            tag = "A1"
            _require(cn + c0 * pi >= 0, tag, "c_n + c0*Pi >= 0")
            _require(ckbk + c0 * bn * pi >= 0, tag, "c_k b_k + c0*b_n*Pi >= 0")
            ell = 1
            u2 = neg(c0)
            v[ell - 1] = pos(c0)
            for i in range(1, n):
                t[i - 1] = c[i - 1] - bn * pi / b[i - 1] * neg(c0)
            t[ell - 1] += a * pi / b[ell - 1] * pos(c0)
            t[n - 1] = cn + c0 * pi
        elif winner == "PiA" and c0 >= 0:
            tag = "A2a"
            _require(cn + c0 * pi <= 0, tag, "c_n + c0*Pi <= 0")
            ell = 1
            v[ell - 1] = c0
            for i in range(1, n):
                t[i - 1] = c[i - 1]
            t[ell - 1] += c0 * a * pi / b[ell - 1]
            s2 = -(cn + c0 * pi)
        elif winner == "PiA":
            tag = "A2b"
            _require(cn + c0 * pi <= 0, tag, "c_n + c0*Pi <= 0")
            _require(ckbk + c0 * a * pi - (bn - a) * pos(cn) >= 0, tag,
                     "c_k b_k + c0*a_n*Pi - (b_n - a_n) c_n^+ >= 0")
            u1 = -c0 - pos(cn) / pi
            u2 = pos(cn) / pi
            for i in range(1, n):
                t[i - 1] = c[i - 1] - (a * pi * u1 + bn * pi * u2) / b[i - 1]
            s2 = neg(cn)
        elif winner == "ZeroB":
            tag = "A3"
            _require(cn >= 0, tag, "c_n >= 0")
            _require(c0 * bn * pi + ckbk <= 0, tag, "c0*b_n*Pi + c_k b_k <= 0")
            _require(-ckbk - c0 * a * pi + cn * (bn - a) >= 0, tag,
                     "-c_k b_k - c0*a_n*Pi + c_n (b_n - a_n) >= 0")
            u1 = pos(ckbk - cn * bn) / (a * pi)
            u2 = min(cn, ckbk / bn) / pi
            for i in range(1, n):
                if i != k:
                    t[i - 1] = c[i - 1] - ckbk / b[i - 1]
            t[n - 1] = pos(cn * bn - ckbk) / bn
            s1 = -c0 - u1 - u2
        else:
            tag = "A4"
            _require(cn <= 0, tag, "c_n <= 0")
            _require(ckbk + c0 * a * pi <= 0, tag, "c_k b_k + c0*a_n*Pi <= 0")
            u1 = ckbk / (a * pi)
            for i in range(1, n):
                if i != k:
                    t[i - 1] = c[i - 1] - ckbk / b[i - 1]
            s1 = -(ckbk + c0 * a * pi) / (a * pi)
            s2 = -cn
    else:
        for i in sets.N_plus:
            t[i - 1] = c[i - 1]
        if winner == "PiB":
            tag = "B1"
            _require(cn + c0 * pi >= 0, tag, "c_n + c0*Pi >= 0")
            _require(c0 * bn * pi + sm >= 0, tag, "c0*b_n*Pi + S^- >= 0")
            _require(c0 * bn * pi + sm + cn * (bn - a) >= 0, tag,
                     "c0*b_n*Pi + S^- + c_n (b_n - a_n) >= 0")
            sigma = neg(cn) / pi
            for i in sets.N_minus:
                lam = c[i - 1] * b[i - 1] / sm
                v[i - 1] = sigma * lam
                w[i - 1] = (c0 - sigma) * lam
                t[i - 1] = c[i - 1] + a * pi / b[i - 1] * v[i - 1] + bn * pi / b[i - 1] * w[i - 1]
            t[n - 1] = cn + pi * sigma
        elif winner == "PiA":
            tag = "B2"
            _require(cn + c0 * pi <= 0, tag, "c_n + c0*Pi <= 0")
            _require(c0 * a * pi + sm >= 0, tag, "c0*a_n*Pi + S^- >= 0")
            ell = sets.N_minus[0]
            for i in sets.N_minus:
                if i != ell:
                    v[i - 1] = -c[i - 1] * b[i - 1] / (a * pi)
            cl_bl = c[ell - 1] * b[ell - 1]
            v[ell - 1] = (c0 * a * pi + sm - cl_bl) / (a * pi)
            t[ell - 1] = (c0 * a * pi + sm) / b[ell - 1]
            s2 = -(cn + c0 * pi)
        elif winner == "ZeroB":
            tag = "B3"
            _require(cn >= 0, tag, "c_n >= 0")
            _require(c0 * bn * pi + sm <= 0, tag, "c0*b_n*Pi + S^- <= 0")
            for i in sets.N_minus:
                w[i - 1] = -c[i - 1] * b[i - 1] / (bn * pi)
            t[n - 1] = cn
            s1 = -(c0 * bn * pi + sm) / (bn * pi)
        else:
            tag = "B4"
            _require(cn <= 0, tag, "c_n <= 0")
            _require(c0 * a * pi + sm <= 0, tag, "c0*a_n*Pi + S^- <= 0")
            _require(c0 * bn * pi + sm + cn * (bn - a) <= 0, tag,
                     "c0*b_n*Pi + S^- + c_n (b_n - a_n) <= 0")
            beta = min(1 / (a * pi), -cn / ((-sm) * pi))
            alpha = (1 - a * pi * beta) / (bn * pi)
            for i in sets.N_minus:
                v[i - 1] = -beta * c[i - 1] * b[i - 1]
                w[i - 1] = -alpha * c[i - 1] * b[i - 1]
            s2 = -cn + pi * beta * sm
            s1 = -(alpha + beta) * sm - c0

    return DualCertificate(u1, u2, s1, s2, tuple(v), tuple(w), tuple(t), tag, ell)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: Fraction
    detail: tuple[Fraction, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...]
    dual_objective: Fraction
    z_star: Fraction

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    def __getitem__(self, name: str) -> Check:
        return next(ch for ch in self.checks if ch.name == name)


def dual_objective(inst: Instance, cert: DualCertificate) -> Fraction:
    n, a, bn, pi = inst.n, inst.a_n, inst.b_n, inst.pi
    return (
        (n - 2) * a * pi * cert.u1
        + (n - 1) * bn * pi * cert.u2
        - a * pi * sum(cert.v, Fraction(0))
        - a * cert.s2
        + sum((bi * ti for bi, ti in zip(inst.b, cert.t)), Fraction(0))
    )


def verify_certificate(
    inst: Instance, obj: Objective, cert: DualCertificate, result: PrimalResult
) -> VerificationReport:
    """Exact dual feasibility and objective match; failures are reported, not raised."""
    _check(inst, obj)
    n, a, bn, pi = inst.n, inst.a_n, inst.b_n, inst.pi
    b, c = inst.b, obj.c
    if len(cert.v) != n - 1 or len(cert.w) != n - 1 or len(cert.t) != n:
        raise ValueError("certificate dimensions do not match the instance")

    most_negative = min(cert.variables().values())
    nonneg = Check("nonnegativity", most_negative >= 0, neg(most_negative))

    r_y = -cert.u1 - cert.u2 + sum(cert.v, Fraction(0)) + sum(cert.w, Fraction(0)) - cert.s1 - obj.c0
    dy = Check("D_y", r_y == 0, r_y)

    r_xi = tuple(
        a / b[i] * pi * cert.u1
        + bn / b[i] * pi * cert.u2
        - a / b[i] * pi * cert.v[i]
        - bn / b[i] * pi * cert.w[i]
        + cert.t[i]
        - c[i]
        for i in range(n - 1)
    )
    worst = max(r_xi, key=abs)
    dxi = Check("D_xi", all(r == 0 for r in r_xi), worst, r_xi)

    r_xn = pi * cert.u2 - pi * sum(cert.v, Fraction(0)) - cert.s2 + cert.t[n - 1] - c[n - 1]
    dxn = Check("D_xn", r_xn == 0, r_xn)

    dual = dual_objective(inst, cert)
    gap = dual - result.z_star
    obj_check = Check("objective", gap == 0, gap)
    return VerificationReport((nonneg, dy, dxi, dxn, obj_check), dual, result.z_star)


def random_objective(rng: random.Random, n: int, bound: int = 10, max_den: int = 6) -> Objective:
    """Rational coefficients in [-bound, bound] with small denominators.

    Small denominators keep exact ties (and so degenerate certificates)
    reasonably frequent.
    """

    def draw() -> Fraction:
        den = rng.randint(1, max_den)
        return Fraction(rng.randint(-bound * den, bound * den), den)

    return Objective(draw(), tuple(draw() for _ in range(n)))
