"""Vertices and inequality systems for the hull of the graph of x_1...x_n.

All inequalities are kept in ``coef_y*y + sum(coef_x[i]*x_i) >= rhs`` form with
the coefficients exactly as constructed (no rescaling), so a row's slack at a
point equals the printed left-hand side of the textbook inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import Instance, fmt, pi_product

__all__ = [
    "LOWER",
    "UPPER",
    "Vertex",
    "LinearInequality",
    "InequalitySystem",
    "vertices",
    "facet_system_cn1",
    "facet_system_cn0",
    "facet_system_mccormick",
    "closed_form_slack",
    "evaluate",
    "vertex_slacks",
    "membership",
    "membership_mask",
    "affine_rank",
    "facet_diagnostics",
    "INSIDE",
    "BOUNDARY",
    "OUTSIDE",
]

LOWER = "lower"
UPPER = "upper"

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"

# Row families of the C_n^1 system, in emission order.
CN1_FAMILIES = ("under_a", "under_b", "over_a", "over_b", "y_lower", "x_upper", "xn_lower")


@dataclass(frozen=True)
class Vertex:
    x: tuple[Fraction, ...]
    y: Fraction
    T: frozenset
    xn_choice: str

    @property
    def point(self) -> tuple[tuple[Fraction, ...], Fraction]:
        return self.x, self.y

    @property
    def full_product(self) -> bool:
        return len(self.T) == len(self.x) - 1


@dataclass(frozen=True)
class LinearInequality:
    """``coef_y*y + sum(coef_x[i]*x_i) >= rhs``; ``index`` is 1-based or None."""

    coef_y: Fraction
    coef_x: tuple[Fraction, ...]
    rhs: Fraction
    family: str
    index: int | None = None

    def __post_init__(self):
        if self.coef_y == 0 and not any(self.coef_x):
            raise ValueError("inequality with all-zero coefficients")

    @property
    def label(self) -> str:
        return self.family if self.index is None else f"{self.family}[{self.index}]"

    def slack(self, x: Sequence[Fraction], y: Fraction) -> Fraction:
        s = -self.rhs
        if self.coef_y:
            s += self.coef_y * y
        for a, xi in zip(self.coef_x, x):
            if a and xi:
                s += a * xi
        return s

    def key(self) -> tuple:
        return (self.coef_y, self.coef_x, self.rhs)

    def __str__(self) -> str:
        terms = []
        if self.coef_y:
            terms.append(f"{fmt(self.coef_y)}*y")
        terms += [f"{fmt(a)}*x{i}" for i, a in enumerate(self.coef_x, start=1) if a]
        return " + ".join(terms).replace("+ -", "- ") + f" >= {fmt(self.rhs)}"


@dataclass(frozen=True)
class InequalitySystem:
    inst: Instance
    rows: tuple[LinearInequality, ...]
    kind: str  # "Cn1", "Cn0", "McCormick22" or "Q"

    def __len__(self) -> int:
        return len(self.rows)

    def family(self, name: str) -> list[LinearInequality]:
        return [r for r in self.rows if r.family == name]

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Float matrix ``A`` over columns (x_1..x_n, y) and vector ``rhs``."""
        A = np.array([[float(a) for a in r.coef_x] + [float(r.coef_y)] for r in self.rows])
        rhs = np.array([float(r.rhs) for r in self.rows])
        return A, rhs


def _bits(n: int):
    """Subsets of {1..n-1} as bitmasks in ascending order."""
    return range(1 << (n - 1))


def vertices(inst: Instance) -> list[Vertex]:
    """All 2^n extreme points, ordered by bitmask of T, then x_n lower before upper."""
    n, b = inst.n, inst.b
    out = []
    for mask in _bits(n):
        T = frozenset(i for i in range(1, n) if mask >> (i - 1) & 1)
        head = tuple(b[i - 1] if i in T else Fraction(0) for i in range(1, n))
        prod_head = inst.pi if len(T) == n - 1 else Fraction(0)
        for choice, xn in ((LOWER, inst.a_n), (UPPER, inst.b_n)):
            out.append(Vertex(head + (xn,), prod_head * xn, T, choice))
    return out


def unit_vector(n: int, i: int, value) -> tuple[Fraction, ...]:
    return tuple(Fraction(value) if j == i else Fraction(0) for j in range(1, n + 1))


def facet_system_cn1(inst: Instance) -> InequalitySystem:
    """The 3n+2 rows describing the hull when only x_n has a positive lower bound."""
    n, a, bn = inst.n, inst.a_n, inst.b_n
    pi = inst.pi
    rows = []

    # y >= a_n * sum_i (Pi/b_i) x_i - (n-2) a_n Pi
    coef = tuple(-a * pi_product(inst, {i, n}) for i in range(1, n)) + (Fraction(0),)
    rows.append(LinearInequality(Fraction(1), coef, -(n - 2) * a * pi, "under_a"))

    # y >= sum_{i in N} (prod_{j != i} b_j) x_i - (n-1) prod b
    coef = tuple(-pi_product(inst, {i}) for i in range(1, n + 1))
    rows.append(LinearInequality(Fraction(1), coef, -(n - 1) * pi * bn, "under_b"))

    for i in range(1, n):
        coef = list(unit_vector(n, i, a * pi_product(inst, {i, n})))
        coef[n - 1] = pi
        rows.append(LinearInequality(Fraction(-1), tuple(coef), a * pi, "over_a", i))

    for i in range(1, n):
        coef = unit_vector(n, i, pi_product(inst, {i}))
        rows.append(LinearInequality(Fraction(-1), coef, Fraction(0), "over_b", i))

    rows.append(LinearInequality(Fraction(1), unit_vector(n, 0, 0), Fraction(0), "y_lower"))

    for i in range(1, n + 1):
        rows.append(LinearInequality(Fraction(0), unit_vector(n, i, -1), -inst.bound(i), "x_upper", i))

    rows.append(LinearInequality(Fraction(0), unit_vector(n, n, 1), a, "xn_lower"))
    return InequalitySystem(inst, tuple(rows), "Cn1")


def facet_system_cn0(inst: Instance) -> InequalitySystem:
    """Pyramid description with every lower bound treated as zero (a_n is ignored)."""
    n = inst.n
    full = pi_product(inst)
    rows = [LinearInequality(Fraction(1), unit_vector(n, 0, 0), Fraction(0), "y_lower")]
    for i in range(1, n + 1):
        rows.append(LinearInequality(Fraction(0), unit_vector(n, i, -1), -inst.bound(i), "x_upper", i))
    # -y + sum (prod_{j!=i} b_j) x_i <= (n-1) prod b, stored negated
    coef = tuple(-pi_product(inst, {i}) for i in range(1, n + 1))
    rows.append(LinearInequality(Fraction(1), coef, -(n - 1) * full, "cut"))
    for i in range(1, n + 1):
        rows.append(
            LinearInequality(-1 / pi_product(inst, {i}), unit_vector(n, i, 1), Fraction(0), "x_lower_lifted", i)
        )
    return InequalitySystem(inst, tuple(rows), "Cn0")


def facet_system_mccormick(a: Sequence, b: Sequence) -> InequalitySystem:
    """The four McCormick inequalities for y = x_1 x_2 on [a_1,b_1] x [a_2,b_2]."""
    a1, a2 = (Fraction(v) for v in a)
    b1, b2 = (Fraction(v) for v in b)
    if not (0 <= a1 < b1 and 0 <= a2 < b2):
        raise ValueError("need 0 <= a_i < b_i")
    # Instance holds (a_2, b); a_1 only appears in the row coefficients
    inst = Instance(2, a2, (b1, b2))
    one = Fraction(1)
    rows = (
        LinearInequality(one, (-a2, -a1), -a1 * a2, "under_lower"),
        LinearInequality(-one, (b2, a1), a1 * b2, "over_1"),
        LinearInequality(-one, (a2, b1), b1 * a2, "over_2"),
        LinearInequality(one, (-b2, -b1), -b1 * b2, "under_upper"),
    )
    return InequalitySystem(inst, rows, "McCormick22")


def closed_form_slack(inst: Instance, row: LinearInequality, v: Vertex) -> Fraction:
    """Tabulated slack of a C_n^1 row at a vertex, by case on (family, T, x_n).

    Written from the case analysis, not by evaluating the row, so it serves as
    an independent check of :func:`evaluate`.
    """
    n, a, bn, pi = inst.n, inst.a_n, inst.b_n, inst.pi
    full = len(v.T) == n - 1
    up = v.xn_choice == UPPER
    t = len(v.T)
    fam, i = row.family, row.index
    if fam == "under_a":
        if full:
            return (bn - a) * pi if up else Fraction(0)
        return (n - 2 - t) * a * pi
    if fam == "under_b":
        if full:
            return Fraction(0)
        return (n - 2 - t) * bn * pi if up else (n - 1 - t) * bn * pi - a * pi
    if fam == "over_a":
        if i in v.T:
            return (bn * pi if up else a * pi) if not full else Fraction(0)
        return (bn - a) * pi if up else Fraction(0)
    if fam == "over_b":
        if i in v.T:
            if full:
                return Fraction(0) if up else (bn - a) * pi
            return bn * pi
        return Fraction(0)
    if fam == "y_lower":
        if full:
            return bn * pi if up else a * pi
        return Fraction(0)
    if fam == "x_upper":
        if i == n:
            return Fraction(0) if up else bn - a
        return Fraction(0) if i in v.T else inst.bound(i)
    if fam == "xn_lower":
        return bn - a if up else Fraction(0)
    raise KeyError(fam)


def _check_dim(sys: InequalitySystem, x: Sequence) -> None:
    if len(x) != sys.inst.n:
        raise ValueError(f"point has {len(x)} x-coordinates, system expects {sys.inst.n}")


def evaluate(sys: InequalitySystem, x: Sequence, y) -> list[Fraction]:
    """Exact slack of every row at the point (x, y)."""
    _check_dim(sys, x)
    x = [Fraction(v) for v in x]
    y = Fraction(y)
    return [r.slack(x, y) for r in sys.rows]


def vertex_slacks(sys: InequalitySystem) -> list[list[Fraction]]:
    """Exact slack of every row at every vertex, in :func:`vertices` order.

    Vertex coordinates are 0 or b_i, so each slack is the slack of the vertex
    with the highest set bit of T cleared plus one term; the whole table
    costs one addition per entry instead of a full row evaluation.
    """
    inst = sys.inst
    n = inst.n
    full = (1 << (n - 1)) - 1
    xn_lower, xn_upper = inst.a_n, inst.b_n
    out = []
    for r in sys.rows:
        step = [r.coef_x[i] * inst.b[i] for i in range(n - 1)]
        lo = [-r.rhs + r.coef_x[-1] * xn_lower]
        hi = [-r.rhs + r.coef_x[-1] * xn_upper]
        for mask in range(1, full + 1):
            top = mask.bit_length() - 1
            lo.append(lo[mask ^ (1 << top)] + step[top])
            hi.append(hi[mask ^ (1 << top)] + step[top])
        lo[full] += r.coef_y * inst.pi * xn_lower
        hi[full] += r.coef_y * inst.pi * xn_upper
        out.append([s for pair in zip(lo, hi) for s in pair])
    return out


def membership(sys: InequalitySystem, x: Sequence, y) -> tuple[str, list[int]]:
    """Classify (x, y) as inside/boundary/outside; also return violated row indices (0-based)."""
    slacks = evaluate(sys, x, y)
    violated = [r for r, s in enumerate(slacks) if s < 0]
    if violated:
        return OUTSIDE, violated
    if any(s == 0 for s in slacks):
        return BOUNDARY, []
    return INSIDE, []


def membership_mask(A: np.ndarray, rhs: np.ndarray, pts: np.ndarray, rtol: float = 2.0**-40) -> np.ndarray:
    """Floating-point membership for many points at once.

    ``pts`` has columns (x_1..x_n, y).  A row counts as satisfied when its
    slack is >= -rtol * (|rhs| + sum |A_rj * p_j|).
    """
    lhs = pts @ A.T
    scale = np.abs(pts) @ np.abs(A).T + np.abs(rhs)
    return np.all(lhs - rhs >= -rtol * scale, axis=1)


def affine_rank(points: Iterable[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull of ``points`` plus one (0 for no points)."""
    pts = [list(map(Fraction, p)) for p in points]
    if not pts:
        return 0
    base = pts[0]
    rows = [[p[j] - base[j] for j in range(len(base))] for p in pts[1:]]
    rank, col, ncols = 0, 0, len(base)
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                f = rows[r][col] / p[col]
                rows[r] = [u - f * w for u, w in zip(rows[r], p)]
        rank += 1
        col += 1
    return rank + 1


def facet_diagnostics(sys: InequalitySystem, verts: Sequence[Vertex] | None = None) -> list[dict]:
    """Per row: tight vertices and how many of them are affinely independent.

    A row of a full-dimensional polytope in R^{n+1} defines a facet exactly
    when this count is n+1.  Reported only; no claim is attached.
    """
    verts = vertices(sys.inst) if verts is None else verts
    n = sys.inst.n
    out = []
    for r in sys.rows:
        tight = [v for v in verts if r.slack(v.x, v.y) == 0]
        independent = affine_rank([v.x + (v.y,) for v in tight])
        out.append(
            {
                "row": r.label,
                "tight_vertices": len(tight),
                "affinely_independent": independent,
                "facet": independent == n + 1,
            }
        )
    return out

