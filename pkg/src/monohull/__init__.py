"""Exact convex hull, LP certificates and volume for the graph of x_1 x_2 ... x_n
on a nonnegative box where only x_n may have a positive lower bound."""

from .core import (
    IndexSets,
    Instance,
    InternalContradiction,
    InvalidInstance,
    Unsupported,
    factorial,
    pi_product,
    parse_rational,
)
from .hull import (
    InequalitySystem,
    LinearInequality,
    Vertex,
    evaluate,
    facet_system_cn0,
    facet_system_cn1,
    facet_system_mccormick,
    membership,
    vertices,
)
from .optimize import (
    DualCertificate,
    Objective,
    PrimalResult,
    brute_force_optimize,
    build_certificate,
    candidate_values,
    classify,
    primal_solve,
    verify_certificate,
)
from .volume import (
    monte_carlo_volume,
    volume_by_decomposition,
    volume_cn0,
    volume_cn1,
    volume_mccormick,
)

__version__ = "0.1.0"
