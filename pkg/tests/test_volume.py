import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from monohull.core import Instance, Unsupported
from monohull.hull import vertices
from monohull.volume import (
    base_volume_B,
    cone_diagnostics,
    cone_volume_F,
    cone_volume_Fi,
    lifted_Q_facets,
    monte_carlo_volume,
    prism_volume,
    pyramid_Q_volume,
    q_vertices,
    separation_check_v2,
    volume_by_decomposition,
    volume_cn0,
    volume_cn1,
    volume_mccormick,
    volume_report,
)

from conftest import instances, random_instance

N2 = Instance(2, 1, (2, 3))
N3 = Instance(3, 1, (1, 1, 2))
lambdas = st.fractions(min_value=F(1, 10), max_value=10, max_denominator=12)


def hull_volume(points):
    return ConvexHull([[float(c) for c in p] for p in points]).volume


def test_cn1_examples():
    assert volume_cn1(N2) == F(8, 3)
    assert volume_cn1(N3) == F(3, 8)


@pytest.mark.parametrize("n, b, expected", [(2, (1, 1), F(1, 6)), (3, (1, 1, 1), F(5, 24)), (2, (2, 3), 6)])
def test_cn0_examples(n, b, expected):
    assert volume_cn0(n, b) == expected


@pytest.mark.parametrize(
    "a, b, expected", [((0, 0), (1, 1), F(1, 6)), ((1, 1), (2, 2), F(1, 6)), ((0, 1), (2, 3), F(8, 3))]
)
def test_mccormick_examples(a, b, expected):
    assert volume_mccormick(a, b) == expected


def test_cn0_rejects_bad_length():
    with pytest.raises(ValueError):
        volume_cn0(3, (1, 1))


@given(instances(n_max=8, allow_zero_an=True))
def test_pyramid_limit(inst):
    assert volume_cn1(inst.with_a_n(0)) == volume_cn0(inst.n, inst.b)


@given(instances(n_min=2, n_max=2))
def test_n2_matches_mccormick(inst):
    assert volume_cn1(inst) == volume_mccormick((0, inst.a_n), inst.b)


@pytest.mark.parametrize(
    "inst, expected",
    [(Instance(3, 1, (1, 1, 5)), F(1, 2)), (Instance(2, 1, (7, 3)), 0), (Instance(4, 1, (1, 1, 1, 2)), F(5, 6))],
)
def test_base_volume(inst, expected):
    assert base_volume_B(inst) == expected


def test_prism_volume():
    assert prism_volume(N3) == F(1, 2)
    assert prism_volume(N2) == 0
    assert prism_volume(Instance(3, 1, (2, 1, 2))) == 2 * prism_volume(N3)


def test_pyramid_Q_volume():
    assert pyramid_Q_volume(N3) == F(1, 8)
    assert pyramid_Q_volume(N3.with_a_n(0)) == 0
    assert pyramid_Q_volume(N2) == 0


def test_cone_volumes():
    assert cone_volume_Fi(N3) == F(1, 12)
    assert cone_volume_Fi(N2) == F(8, 3)
    assert cone_volume_Fi(Instance(3, F(199, 100), (1, 1, 2))) == F(1, 120000)
    assert cone_volume_F(N3) == F(1, 12)
    assert cone_volume_F(N2) == 0
    assert cone_volume_F(Instance(4, 1, (1, 1, 1, 2))) == F(1, 12)


def test_decomposition_examples():
    d = volume_by_decomposition(N3)
    assert (d.vol_Q, d.cone_Fi_total, d.cone_F, d.total) == (F(1, 8), F(1, 6), F(1, 12), F(3, 8))
    d = volume_by_decomposition(N2)
    assert (d.vol_Q, d.cone_Fi_total, d.cone_F, d.total) == (0, F(8, 3), 0, F(8, 3))


@given(instances(n_max=10))
@settings(max_examples=150)
def test_decomposition_identity(inst):
    assert volume_by_decomposition(inst).total == volume_cn1(inst)


@given(instances(n_max=8, allow_zero_an=True), lambdas)
def test_homogeneity(inst, lam):
    n = inst.n
    base = volume_cn1(inst)
    assert volume_cn1(inst.scaled(lam_front=lam)) == lam ** (2 * (n - 1)) * base
    assert volume_cn1(inst.scaled(lam_last=lam)) == lam**2 * base


@given(instances(n_max=8), st.integers(3, 12))
def test_strictly_decreasing_in_lower_bound(inst, steps):
    grid = [inst.b_n * F(k, steps) for k in range(steps)]
    vols = [volume_cn1(inst.with_a_n(a)) for a in grid]
    assert all(u > v for u, v in zip(vols, vols[1:]))
    assert vols[-1] > 0


@given(instances(n_max=8), lambdas)
def test_monotone_in_front_bound(inst, lam):
    grow = 1 + lam
    b = (inst.b[0] * grow,) + inst.b[1:]
    assert volume_cn1(Instance(inst.n, inst.a_n, b)) > volume_cn1(inst)


def test_degenerate_box_limit():
    # as a_n approaches b_n the volume vanishes linearly
    for eps in (F(1, 10), F(1, 1000), F(1, 10**6)):
        v = volume_cn1(N3.with_a_n(2 - eps))
        assert 0 < v < eps


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_cn1_against_convex_hull(n):
    rng = random.Random(40 + n)
    for _ in range(3):
        inst = random_instance(rng, n)
        pts = [v.x + (v.y,) for v in vertices(inst)]
        exact = float(volume_cn1(inst))
        assert hull_volume(pts) == pytest.approx(exact, rel=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_q_and_cones_against_convex_hull(n):
    rng = random.Random(80 + n)
    for _ in range(3):
        inst = random_instance(rng, n)
        qv = q_vertices(inst)
        assert hull_volume([x + (y,) for x, y in qv]) == pytest.approx(float(pyramid_Q_volume(inst)), rel=1e-9)
        sys = lifted_Q_facets(inst)
        v2 = (inst.b, inst.b_n * inst.pi)
        for r in sys.rows:
            if r.family not in ("lift_x_lower", "lift_xn_upper"):
                continue
            face = [x + (y,) for x, y in qv if r.slack(x, y) == 0]
            cone = hull_volume(face + [v2[0] + (v2[1],)])
            expected = cone_volume_Fi(inst) if r.family == "lift_x_lower" else cone_volume_F(inst)
            assert cone == pytest.approx(float(expected), rel=1e-9)


@given(instances(n_min=3, n_max=7))
def test_cone_diagnostics(inst):
    diag = cone_diagnostics(inst)
    n = inst.n
    for i in range(1, n):
        assert diag[f"facet_F{i}"] * diag[f"height_F{i}"] / (n + 1) == pytest.approx(float(cone_volume_Fi(inst)), rel=1e-9)
    assert diag["facet_F"] * diag["height_F"] / (n + 1) == pytest.approx(float(cone_volume_F(inst)), rel=1e-9)


@given(instances(n_max=7))
def test_lifted_facets_valid_on_q_vertices(inst):
    sys = lifted_Q_facets(inst)
    assert len(sys) == 2 * inst.n + 2
    for x, y in q_vertices(inst):
        assert all(r.slack(x, y) >= 0 for r in sys.rows)
    x1, y1 = q_vertices(inst)[-1]
    tight = {r.family for r in sys.rows if r.slack(x1, y1) == 0}
    assert {"lift_x_lower", "lift_xn_upper", "lift_cut"} <= tight
    assert len(q_vertices(inst)) == 2**inst.n - 1


def test_lifted_facets_need_positive_an():
    with pytest.raises(Unsupported):
        lifted_Q_facets(N3.with_a_n(0))
    with pytest.raises(Unsupported):
        separation_check_v2(N3.with_a_n(0))


@given(instances(n_max=8))
def test_separation_table(inst):
    a, bn, pi = inst.a_n, inst.b_n, inst.pi
    rows = separation_check_v2(inst)
    by_label = {r.row: r for r in rows}
    for i in range(1, inst.n):
        assert by_label[f"lift_x_lower[{i}]"].slack == inst.bound(i) * (1 - bn / a)
        assert by_label[f"x_upper[{i}]"].slack == 0
    assert by_label["xn_lower"].slack == bn - a
    assert by_label["lift_xn_upper"].slack == -(bn - a) * bn / a
    assert by_label["lift_cut"].slack == bn / a - 1
    assert by_label["y_lower"].slack == bn * pi
    separating = [r.row for r in rows if r.separates]
    assert separating == [f"lift_x_lower[{i}]" for i in range(1, inst.n)] + ["lift_xn_upper"]


def test_monte_carlo_single_sample():
    for seed in range(20):
        mc = monte_carlo_volume(N3, 1, seed)
        assert mc.estimate in (0.0, mc.box_volume)
    assert mc.box_volume == 2.0


def test_monte_carlo_rejects_bad_args():
    with pytest.raises(ValueError):
        monte_carlo_volume(N3, 0)
    with pytest.raises(ValueError):
        monte_carlo_volume(N3, 10, shards=0)


def test_monte_carlo_reproducible():
    a = monte_carlo_volume(N3, 50_000, seed=11)
    b = monte_carlo_volume(N3, 50_000, seed=11)
    assert a == b
    s1 = monte_carlo_volume(N3, 50_001, seed=11, shards=4)
    s2 = monte_carlo_volume(N3, 50_001, seed=11, shards=4)
    assert s1 == s2 and s1.samples == 50_001


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_monte_carlo_close(n):
    inst = random_instance(random.Random(900 + n), n)
    mc = monte_carlo_volume(inst, 10**6, seed=n, shards=2)
    assert abs(mc.estimate - float(volume_cn1(inst))) <= 4 * mc.std_error


def test_monte_carlo_pyramid():
    inst = Instance(3, 0, (1, 2, 3))
    mc = monte_carlo_volume(inst, 200_000, seed=3)
    assert abs(mc.estimate - float(volume_cn0(3, inst.b))) <= 4 * mc.std_error


def test_volume_report():
    rep = volume_report(N3, 1000, seed=1)
    assert rep.consistent and rep.closed_form == F(3, 8)
    assert rep.monte_carlo.samples == 1000
    assert volume_report(N3).monte_carlo is None


def test_float_sanity_n_large():
    inst = Instance(10, F(1, 2), (1,) * 9 + (2,))
    v = volume_cn1(inst)
    expected = 1.5 / math.factorial(11) * ((math.factorial(10) - 1) * 2 + (math.factorial(9) - 10) * 0.5)
    assert float(v) == pytest.approx(expected)
