import math

import numpy as np
import pytest

from trapnet import (NoTransitionError, NotALinePointError, NotANodeError, PlanarJet,
                     Poly2, X, Y, catalog, classify_node, critical_points,
                     multipole_order, null_lines, quadratic_part, synthesize,
                     threshold_scan, transverse_confinement)

PI2 = math.pi**2


def round_gen(c):
    return catalog("round", {"c": c}).compile()


def cusp_distance(px, py):
    """Distance from a point to the parametric curve (t^2, t^3), brute force."""
    ts = np.linspace(-1.6, 1.6, 8001)
    d2 = (px - ts**2) ** 2 + (py - ts**3) ** 2
    i = int(np.argmin(d2))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, len(ts) - 1)]
    fine = np.linspace(lo, hi, 201)
    return float(np.sqrt(((px - fine**2) ** 2 + (py - fine**3) ** 2).min()))


# ----------------------------------------------------------------------
# null lines
# ----------------------------------------------------------------------

def test_null_lines_cusp_single_polyline_near_curve():
    lines = null_lines(catalog("cusp").compile(), (-0.5, 2.5, -3.0, 3.0), 400)
    assert len(lines) == 1
    assert not lines[0].closed
    cell_diag = math.hypot(3.0 / 399, 6.0 / 399)
    worst = max(cusp_distance(px, py) for px, py in lines[0].points)
    assert worst <= 2 * cell_diag


def test_null_lines_linear_guide_is_vertical_line():
    lines = null_lines(catalog("linear").compile(), (-1.0, 1.0, -1.0, 1.0), 101)
    assert len(lines) == 1
    xs = [px for px, _ in lines[0].points]
    assert max(abs(v) for v in xs) < 1e-12
    ys = [py for _, py in lines[0].points]
    assert ys == sorted(ys) or ys == sorted(ys, reverse=True)


def test_null_lines_round_c0_are_diagonals():
    lines = null_lines(round_gen(0.0), (-2.0, 2.0, -2.0, 2.0), 201)
    assert lines
    for pl in lines:
        for px, py in pl.points:
            ds = min(min(abs(px + py - k) for k in (-3, -1, 1, 3)),
                     min(abs(px - py - k) for k in (-3, -1, 1, 3)))
            assert ds < 5e-3


def test_null_lines_empty_when_no_zeros():
    gen = Poly2({(0, 0): 1.0, (2, 0): 1.0})  # 1 + x^2 > 0
    assert null_lines(gen, (-1, 1, -1, 1), 64) == []


def test_null_lines_resolution_validation():
    with pytest.raises(ValueError):
        null_lines(X, (-1, 1, -1, 1), 1)


def test_null_lines_closed_loop():
    # x^2 + y^2 - 1: a circle, one closed polyline
    gen = Poly2({(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0})
    lines = null_lines(gen, (-1.5, 1.5, -1.5, 1.5), 121)
    assert len(lines) == 1
    assert lines[0].closed
    radii = [math.hypot(px, py) for px, py in lines[0].points]
    assert max(abs(r - 1.0) for r in radii) < 5e-3


def test_null_lines_saddle_cells_use_center_sample():
    # P = x*y with the saddle strictly inside a grid cell: the ambiguous
    # cell must pair its crossings by the sign of the cell-center sample
    gen = catalog("cross").compile()
    lines = null_lines(gen, (-1.03, 0.97, -1.01, 0.99), 40)
    assert len(lines) >= 2
    for pl in lines:
        for px, py in pl.points:
            assert min(abs(px), abs(py)) < 0.06  # on one of the two axes


def test_null_lines_vertex_first_order_error_bound():
    for gen, window, res in [
        (catalog("cusp").compile(), (-0.5, 2.5, -3.0, 3.0), 200),
        (round_gen(0.2), (-2.0, 2.0, -2.0, 2.0), 150),
    ]:
        jet = PlanarJet(gen)
        x0, x1, y0, y1 = window
        diag = math.hypot((x1 - x0) / (res - 1), (y1 - y0) / (res - 1))
        for pl in null_lines(gen, window, res):
            for px, py in pl.points:
                grad = float(np.linalg.norm(jet.grad(px, py)))
                if grad * diag < 1e-3:  # skip the neighborhood of nodes
                    continue
                assert abs(jet.value(px, py)) <= grad * diag


# ----------------------------------------------------------------------
# critical points
# ----------------------------------------------------------------------

def test_critical_points_cusp_single_node_at_origin():
    pts = critical_points(catalog("cusp").compile(), (-1.0, 2.0, -2.0, 2.0), 24)
    assert len(pts) == 1
    cp = pts[0]
    assert cp.is_node
    assert math.hypot(cp.x, cp.y) < 1e-6
    assert cp.grad_norm < 1e-10


def test_critical_points_round_nodes_at_edge_midpoints():
    pts = critical_points(round_gen(0.2), (-2.0, 2.0, -2.0, 2.0), 32)
    nodes = {(round(cp.x, 6), round(cp.y, 6)) for cp in pts if cp.is_node}
    for want in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]:
        assert want in nodes
    # lattice extrema are critical but not on the null set
    non_nodes = {(round(cp.x, 6), round(cp.y, 6)) for cp in pts if not cp.is_node}
    assert (0.0, 0.0) in non_nodes


def test_critical_points_linear_none():
    assert critical_points(catalog("linear").compile(), (-1, 1, -1, 1), 16) == []


def test_round_node_set_symmetry():
    pts = critical_points(round_gen(0.2), (-2.0, 2.0, -2.0, 2.0), 32)
    nodes = [(cp.x, cp.y) for cp in pts if cp.is_node]
    assert nodes

    def closest(p, cloud):
        return min(math.hypot(p[0] - q[0], p[1] - q[1]) for q in cloud)

    for x, y in nodes:
        assert closest((y, x), nodes) < 1e-8   # (x, y) -> (y, x)
        assert closest((-x, y), nodes) < 1e-8  # (x, y) -> (-x, y)


# ----------------------------------------------------------------------
# quadratic part and node classification
# ----------------------------------------------------------------------

def test_quadratic_part_round_node():
    for c in (0.1, 0.25, 0.4):
        value, grad, q2 = quadratic_part(round_gen(c), (1.0, 0.0))
        assert abs(value) < 1e-13
        assert np.abs(grad).max() < 1e-13
        assert q2.xx == pytest.approx(PI2 * (0.5 - 2 * c), abs=1e-10)
        assert q2.yy == pytest.approx(-PI2 * (0.5 + 2 * c), abs=1e-10)
        assert abs(q2.xy) < 1e-10


def test_quadratic_part_round_threshold():
    _, _, q2 = quadratic_part(round_gen(0.25), (1.0, 0.0))
    assert q2.xx == pytest.approx(0.0, abs=1e-12)
    assert q2.yy == pytest.approx(-PI2, abs=1e-10)


def test_quadratic_part_cusp_origin():
    value, grad, q2 = quadratic_part(catalog("cusp").compile(), (0.0, 0.0))
    assert value == 0.0
    np.testing.assert_allclose(grad, 0.0)
    assert (q2.xx, q2.xy, q2.yy) == (0.0, 0.0, 1.0)


def test_classify_node_crossing_angle():
    report = classify_node(round_gen(0.2), (1.0, 0.0))
    assert report.kind == "crossing"
    assert report.angle == pytest.approx(2.0 * math.atan(1.0 / 3.0), abs=1e-10)
    assert report.multipole_order == 3


def test_classify_node_isolated():
    assert classify_node(round_gen(0.3), (1.0, 0.0)).kind == "isolated"


def test_classify_node_degenerate_at_threshold():
    report = classify_node(round_gen(0.25), (1.0, 0.0))
    assert report.kind == "degenerate"
    assert report.angle is None


def test_classify_node_rejects_non_node():
    with pytest.raises(NotANodeError):
        classify_node(round_gen(0.2), (0.5, 0.5))
    with pytest.raises(NotANodeError):
        classify_node(catalog("linear").compile(), (0.0, 0.0))


def test_classify_cross_generator():
    report = classify_node(catalog("cross").compile(), (0.0, 0.0))
    assert report.kind == "crossing"
    assert report.angle == pytest.approx(math.pi / 2)
    assert report.multipole_order == 3


# ----------------------------------------------------------------------
# multipole order
# ----------------------------------------------------------------------

def test_multipole_round_node_is_hexapole():
    f = synthesize(round_gen(0.25))
    assert multipole_order(f, (1.0, 0.0, 0.0)) == 3


def test_multipole_linear_guide_is_quadrupole():
    f = synthesize(catalog("linear").compile())
    for y in (-1.0, 0.0, 2.5):
        assert multipole_order(f, (0.0, y, 0.0)) == 2


def test_multipole_cross_is_hexapole():
    f = synthesize(catalog("cross").compile())
    assert multipole_order(f, (0.0, 0.0, 0.0)) == 3


def test_multipole_generic_point_is_order_zero():
    f = synthesize(catalog("cusp").compile())
    assert multipole_order(f, (0.5, 0.5, 0.3)) == 0


def test_multipole_order_beyond_four_reported_as_five():
    # z*x^4 - 2 z^3 x^2 + z^5/5: every term is fifth order at the origin
    from trapnet import X, odd_extend
    f = synthesize(X**4)
    assert multipole_order(f, (0.0, 0.0, 0.0)) == 5


def test_multipole_zero_field_rejected():
    from trapnet import Field, ZSeries
    with pytest.raises(ValueError):
        multipole_order(Field(ZSeries({})), (0.0, 0.0, 0.0))


# ----------------------------------------------------------------------
# transverse confinement
# ----------------------------------------------------------------------

def test_confinement_linear_guide_exact():
    gen = catalog("linear").compile()
    f = synthesize(gen)
    for y in (-1.2, 0.0, 0.7):
        lam_n, lam_z = transverse_confinement(f, gen, (0.0, y))
        assert lam_n == 2.0
        assert lam_z == 2.0


def test_confinement_cusp_point():
    gen = catalog("cusp").compile()
    f = synthesize(gen)
    lam_n, lam_z = transverse_confinement(f, gen, (1.0, 1.0))
    assert lam_n == pytest.approx(26.0, rel=1e-12)
    assert lam_z == pytest.approx(26.0, rel=1e-12)


def test_confinement_round_c0():
    gen = round_gen(0.0)
    f = synthesize(gen)
    lam_n, lam_z = transverse_confinement(f, gen, (0.5, 0.5))
    assert lam_n == pytest.approx(4 * PI2, rel=1e-12)
    assert lam_z == pytest.approx(4 * PI2, rel=1e-12)


def test_confinement_consistency_random_regular_points():
    rng = np.random.default_rng(20)
    cases = []
    lin = catalog("linear").compile()
    cases += [(lin, (0.0, float(u))) for u in rng.uniform(-2, 2, 20)]
    cusp = catalog("cusp").compile()
    cases += [(cusp, (float(t**2), float(t**3))) for t in rng.uniform(0.3, 1.3, 20)]
    r0 = round_gen(0.0)
    cases += [(r0, (float(t), float(1.0 - t))) for t in rng.uniform(0.1, 0.9, 20)]
    for gen, point in cases:
        f = synthesize(gen)
        jet = PlanarJet(gen)
        want = 2.0 * float(jet.grad(*point) @ jet.grad(*point))
        lam_n, lam_z = transverse_confinement(f, gen, point)
        assert lam_n == pytest.approx(want, rel=1e-6)
        assert lam_z == pytest.approx(want, rel=1e-6)


def test_confinement_rejects_node_and_off_line_points():
    gen = round_gen(0.2)
    f = synthesize(gen)
    with pytest.raises(NotALinePointError):
        transverse_confinement(f, gen, (1.0, 0.0))  # node
    with pytest.raises(NotALinePointError):
        transverse_confinement(f, gen, (0.3, 0.1))  # off the null set


# ----------------------------------------------------------------------
# threshold scan
# ----------------------------------------------------------------------

def test_threshold_scan_positive_range():
    t = threshold_scan(round_gen, (1.0, 0.0), (0.0, 0.5))
    assert t == pytest.approx(0.25, abs=1e-6)


def test_threshold_scan_negative_range():
    t = threshold_scan(round_gen, (1.0, 0.0), (-0.5, 0.0))
    assert t == pytest.approx(-0.25, abs=1e-6)


def test_threshold_scan_no_transition():
    with pytest.raises(NoTransitionError):
        threshold_scan(round_gen, (1.0, 0.0), (0.0, 0.2))
