"""Volumes: closed forms, the pyramid/cone decomposition, and a Monte Carlo oracle.

Every exact quantity is a rational.  Square roots only appear in the
base/height factors of the cone pieces; those are exposed as float
diagnostics in :func:`cone_diagnostics` and never feed the exact path.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import Instance, Unsupported, factorial, pi_product
from .hull import InequalitySystem, LinearInequality, unit_vector, facet_system_cn1, membership_mask

__all__ = [
    "volume_cn1",
    "volume_cn0",
    "volume_mccormick",
    "base_volume_B",
    "prism_volume",
    "pyramid_Q_volume",
    "lifted_Q_facets",
    "q_vertices",
    "separation_check_v2",
    "SeparationRow",
    "cone_volume_Fi",
    "cone_volume_F",
    "cone_diagnostics",
    "Decomposition",
    "MonteCarlo",
    "VolumeReport",
    "volume_by_decomposition",
    "monte_carlo_volume",
    "volume_report",
]


def _sq_front(inst: Instance) -> Fraction:
    return inst.pi ** 2


def volume_cn1(inst: Instance) -> Fraction:
    n, a, bn = inst.n, inst.a_n, inst.b_n
    return (
        (bn - a) * _sq_front(inst) / factorial(n + 1)
        * ((factorial(n) - 1) * bn + (factorial(n - 1) - n) * a)
    )


def volume_cn0(n: int, b) -> Fraction:
    """Volume of the pyramid hull over [0, b_1] x ... x [0, b_n]."""
    if n < 2 or len(b) != n:
        raise ValueError("need n >= 2 and n upper bounds")
    prod_sq = Fraction(1)
    for bi in b:
        prod_sq *= Fraction(bi) ** 2
    return prod_sq * (factorial(n) - 1) / factorial(n + 1)


def volume_mccormick(a, b) -> Fraction:
    a1, a2 = (Fraction(v) for v in a)
    b1, b2 = (Fraction(v) for v in b)
    if not (a1 < b1 and a2 < b2):
        raise ValueError("need a_i < b_i")
    return (b1 - a1) ** 2 * (b2 - a2) ** 2 / 6


def base_volume_B(inst: Instance) -> Fraction:
    """(n-1)-volume of the box over x_1..x_{n-1} with its top corner simplex removed."""
    f = factorial(inst.n - 1)
    return Fraction(f - 1, f) * inst.pi


def prism_volume(inst: Instance) -> Fraction:
    return (inst.b_n - inst.a_n) * base_volume_B(inst)


def pyramid_Q_volume(inst: Instance) -> Fraction:
    """Pyramid over the y = 0 prism with apex at the full-product vertex with x_n = a_n."""
    n, a, bn = inst.n, inst.a_n, inst.b_n
    f = factorial(n - 1)
    return Fraction(f - 1, (n + 1) * f) * a * (bn - a) * _sq_front(inst)


def _v1(inst: Instance):
    x = inst.b[:-1] + (inst.a_n,)
    return x, inst.pi * inst.a_n


def _v2(inst: Instance):
    return inst.b, inst.pi * inst.b_n


def q_vertices(inst: Instance) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """The 2^n - 2 prism vertices (y = 0) followed by v1."""
    n = inst.n
    pts = []
    for mask in range((1 << (n - 1)) - 1):
        head = tuple(inst.b[i] if mask >> i & 1 else Fraction(0) for i in range(n - 1))
        for xn in (inst.a_n, inst.b_n):
            pts.append((head + (xn,), Fraction(0)))
    pts.append(_v1(inst))
    return pts


def lifted_Q_facets(inst: Instance) -> InequalitySystem:
    """Facets of the pyramid Q: each prism facet lifted through v1, plus y >= 0."""
    if inst.a_n == 0:
        raise Unsupported("lifted facets divide by a_n; need a_n > 0")
    n, a, bn, pi = inst.n, inst.a_n, inst.b_n, inst.pi
    one, zero = Fraction(1), Fraction(0)
    rows = []
    for i in range(1, n):
        rows.append(
            LinearInequality(-1 / (a * pi_product(inst, {i, n})), unit_vector(n, i, 1), zero, "lift_x_lower", i)
        )
    for i in range(1, n):
        rows.append(LinearInequality(zero, unit_vector(n, i, -1), -inst.bound(i), "x_upper", i))
    rows.append(LinearInequality(zero, unit_vector(n, n, 1), a, "xn_lower"))
    rows.append(LinearInequality(-(bn - a) / (a * pi), unit_vector(n, n, -1), -bn, "lift_xn_upper"))
    coef = tuple(-1 / inst.bound(i) for i in range(1, n)) + (zero,)
    rows.append(LinearInequality(1 / (a * pi), coef, -Fraction(n - 2), "lift_cut"))
    rows.append(LinearInequality(one, unit_vector(n, 0, 0), zero, "y_lower"))
    return InequalitySystem(inst, tuple(rows), "Q")


@dataclass(frozen=True)
class SeparationRow:
    row: str
    slack: Fraction
    separates: bool


def separation_check_v2(inst: Instance) -> list[SeparationRow]:
    """Slack of the full-product x_n = b_n vertex on every facet of Q."""
    sys = lifted_Q_facets(inst)
    x, y = _v2(inst)
    out = []
    for r in sys.rows:
        s = r.slack(x, y)
        out.append(SeparationRow(r.label, s, s < 0))
    return out


def cone_volume_Fi(inst: Instance) -> Fraction:
    """Volume of conv(F_i ∪ {v2}); identical for every i < n."""
    n, a, bn = inst.n, inst.a_n, inst.b_n
    return (bn - a) ** 2 * _sq_front(inst) / (n * (n + 1))


def cone_volume_F(inst: Instance) -> Fraction:
    n, a, bn = inst.n, inst.a_n, inst.b_n
    return (
        Fraction(factorial(n - 1) - 1, factorial(n) * (n + 1))
        * bn * (bn - a) * _sq_front(inst)
    )


def cone_diagnostics(inst: Instance) -> dict[str, float]:
    """Un-cancelled facet measures and apex heights (floats).

    ``facet_Fi * height_Fi / (n+1)`` and ``facet_F * height_F / (n+1)``
    reproduce the exact cone volumes up to rounding.
    """
    n = inst.n
    a, bn = float(inst.a_n), float(inst.b_n)
    pi = float(inst.pi)
    out = {}
    for i in range(1, n):
        rest = float(pi_product(inst, {i, n}))
        root = math.sqrt(1 + a * a * rest * rest)
        out[f"facet_F{i}"] = (bn - a) * pi * root / n
        out[f"height_F{i}"] = (bn - a) * pi / root
    f = factorial(n - 1)
    root = math.sqrt((bn - a) ** 2 + a * a * pi * pi)
    out["facet_F"] = (f - 1) / factorial(n) * pi * root
    out["height_F"] = (bn - a) * pi * bn / root if root else 0.0
    return out


@dataclass(frozen=True)
class Decomposition:
    vol_B: Fraction
    vol_Pn: Fraction
    vol_Q: Fraction
    cone_Fi_each: Fraction
    cone_Fi_total: Fraction
    cone_F: Fraction
    total: Fraction


def volume_by_decomposition(inst: Instance) -> Decomposition:
    """Sum of vol(Q), the n-1 cones over F_i and the cone over F."""
    q = pyramid_Q_volume(inst)
    each = cone_volume_Fi(inst)
    fi_total = (inst.n - 1) * each
    f = cone_volume_F(inst)
    return Decomposition(base_volume_B(inst), prism_volume(inst), q, each, fi_total, f, q + fi_total + f)


@dataclass(frozen=True)
class MonteCarlo:
    estimate: float
    std_error: float
    samples: int
    seed: int
    shards: int = 1
    hits: int = 0
    box_volume: float = 0.0


def _bounding_box(inst: Instance) -> tuple[np.ndarray, np.ndarray]:
    lo = [0.0] * (inst.n - 1) + [float(inst.a_n), 0.0]
    hi = [float(v) for v in inst.b] + [float(inst.pi * inst.b_n)]
    return np.array(lo), np.array(hi)


def _count_hits(A, rhs, lo, hi, samples: int, seed_seq, chunk: int = 200_000) -> int:
    rng = np.random.default_rng(seed_seq)
    hits, left = 0, samples
    while left > 0:
        m = min(chunk, left)
        pts = lo + (hi - lo) * rng.random((m, lo.size))
        hits += int(membership_mask(A, rhs, pts).sum())
        left -= m
    return hits


def monte_carlo_volume(inst: Instance, samples: int, seed: int = 0, shards: int = 1) -> MonteCarlo:
    """Hit-or-miss estimate over the bounding box of the hull.

    Reproducible for fixed (seed, samples, shards).  With ``shards > 1`` each
    shard draws from its own child of ``SeedSequence(seed)``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    A, rhs = facet_system_cn1(inst).as_arrays()
    lo, hi = _bounding_box(inst)
    box = float(np.prod(hi - lo))
    if shards == 1:
        hits = _count_hits(A, rhs, lo, hi, samples, np.random.SeedSequence(seed))
    else:
        sizes = [samples // shards + (s < samples % shards) for s in range(shards)]
        children = np.random.SeedSequence(seed).spawn(shards)
        with ThreadPoolExecutor(max_workers=shards) as pool:
            hits = sum(pool.map(lambda args: _count_hits(A, rhs, lo, hi, *args), zip(sizes, children)))
    p = hits / samples
    return MonteCarlo(p * box, box * math.sqrt(p * (1 - p) / samples), samples, seed, shards, hits, box)


@dataclass
class VolumeReport:
    closed_form: Fraction
    decomposition: Decomposition
    monte_carlo: MonteCarlo | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.decomposition.total == self.closed_form


def volume_report(inst: Instance, samples: int = 0, seed: int = 0, shards: int = 1) -> VolumeReport:
    mc = monte_carlo_volume(inst, samples, seed, shards) if samples > 0 else None
    return VolumeReport(volume_cn1(inst), volume_by_decomposition(inst), mc)
