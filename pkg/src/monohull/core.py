"""Exact scalars, index helpers and the problem instance.

Indexing convention: every index that crosses the public API (subsets ``T``,
``N_plus``/``N_minus``, ``k``, ``ell``, row indices of per-variable families)
is 1-based, so variable ``i`` is ``x[i - 1]`` in the stored tuples.  Index
``n`` is always the variable carrying the (possibly positive) lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Rational",
    "InvalidInstance",
    "Unsupported",
    "InternalContradiction",
    "Instance",
    "IndexSets",
    "factorial",
    "pi_product",
    "parse_rational",
    "parse_vector",
    "fmt",
    "pos",
    "neg",
]

Rational = Fraction


class InvalidInstance(ValueError):
    """Problem data violates the domain assumptions."""


class Unsupported(ValueError):
    """The requested construction is undefined for this instance (a_n = 0)."""


class InternalContradiction(RuntimeError):
    """A proven precondition failed; always an implementation bug."""


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a decimal string exactly.

    Floats are rejected since they carry binary rounding; ints and
    Fractions pass through.
    """
    if isinstance(text, bool):
        raise TypeError("bool is not a rational")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("pass rationals as strings, not floats")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def parse_vector(text) -> tuple[Fraction, ...]:
    if isinstance(text, str):
        parts = [p for p in text.split(",") if p.strip()]
    else:
        parts = list(text)
    return tuple(parse_rational(p) for p in parts)


def fmt(q: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` (``"p"`` when integral)."""
    return str(Fraction(q))


def pos(g: Fraction) -> Fraction:
    return g if g > 0 else Fraction(0)


def neg(g: Fraction) -> Fraction:
    return -g if g < 0 else Fraction(0)


def factorial(m: int) -> int:
    if m < 0:
        raise ValueError("factorial of a negative number")
    return math.factorial(m)


@dataclass(frozen=True)
class Instance:
    """Box ``[0, b_1] x ... x [0, b_{n-1}] x [a_n, b_n]`` for the monomial x_1...x_n."""

    n: int
    a_n: Fraction
    b: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a_n", parse_rational(self.a_n))
        object.__setattr__(self, "b", tuple(parse_rational(v) for v in self.b))
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidInstance(f"n must be an integer >= 2, got {self.n!r}")
        if len(self.b) != self.n:
            raise InvalidInstance(f"expected {self.n} upper bounds, got {len(self.b)}")
        for i, bi in enumerate(self.b, start=1):
            if bi <= 0:
                raise InvalidInstance(f"upper bound b_{i} must be > 0, got {fmt(bi)}")
        if self.a_n < 0:
            raise InvalidInstance(f"lower bound a_n must be >= 0, got {fmt(self.a_n)}")
        if self.a_n >= self.b_n:
            raise InvalidInstance(
                f"need a_n < b_n, got a_n={fmt(self.a_n)}, b_n={fmt(self.b_n)}"
            )

    @property
    def b_n(self) -> Fraction:
        return self.b[-1]

    @cached_property
    def pi(self) -> Fraction:
        """Product of the upper bounds of x_1..x_{n-1}."""
        return pi_product(self, {self.n})

    @property
    def is_pyramid(self) -> bool:
        """True in the degenerate a_n = 0 regime, where the hull is a pyramid."""
        return self.a_n == 0

    def bound(self, i: int) -> Fraction:
        return self.b[i - 1]

    def scaled(self, lam_front=1, lam_last=1) -> "Instance":
        """Scale b_1..b_{n-1} by ``lam_front`` and (a_n, b_n) by ``lam_last``."""
        lam_front, lam_last = Fraction(lam_front), Fraction(lam_last)
        b = tuple(bi * lam_front for bi in self.b[:-1]) + (self.b_n * lam_last,)
        return Instance(self.n, self.a_n * lam_last, b)

    def with_a_n(self, a_n) -> "Instance":
        return Instance(self.n, a_n, self.b)

    def to_dict(self) -> dict:
        return {"n": self.n, "an": fmt(self.a_n), "b": [fmt(v) for v in self.b]}

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        b = data["b"]
        return cls(int(data["n"]), parse_rational(data.get("an", 0)), parse_vector(b))


def pi_product(inst: Instance, excluded: Iterable[int] = ()) -> Fraction:
    """Product of b_j over j in {1..n} minus ``excluded``; empty product is 1."""
    skip = set(excluded)
    bad = skip - set(range(1, inst.n + 1))
    if bad:
        raise ValueError(f"indices out of range: {sorted(bad)}")
    out = Fraction(1)
    for j in range(1, inst.n + 1):
        if j not in skip:
            out *= inst.b[j - 1]
    return out


@dataclass(frozen=True)
class IndexSets:
    """Sign split of an objective over the zero-lower-bound variables."""

    N_plus: tuple[int, ...]
    N_minus: tuple[int, ...]
    S_plus: Fraction
    S_minus: Fraction
    pi: Fraction
    k: int | None = None

    @property
    def case(self) -> str:
        return "A" if not self.N_minus else "B"


def split_signs(inst: Instance, c: Sequence[Fraction]) -> IndexSets:
    """Partition {1..n-1} by the sign of c_i (zeros go to N_plus)."""
    n = inst.n
    plus = tuple(i for i in range(1, n) if c[i - 1] >= 0)
    minus = tuple(i for i in range(1, n) if c[i - 1] < 0)
    s_plus = sum((c[i - 1] * inst.b[i - 1] for i in plus), Fraction(0))
    s_minus = sum((c[i - 1] * inst.b[i - 1] for i in minus), Fraction(0))
    k = None
    if not minus:
        # smallest index among minimizers of c_j b_j
        k = min(plus, key=lambda j: (c[j - 1] * inst.b[j - 1], j))
    return IndexSets(plus, minus, s_plus, s_minus, inst.pi, k)
