from fractions import Fraction

import pytest

from ttlab.errors import (
    BadIndex,
    ModeMismatch,
    NonPositiveHeight,
    OutOfRange,
)
from ttlab.rng import CounterRandom
from ttlab.surface import (
    area,
    build_surface,
    cylinder_twist,
    geodesic_flow,
    horizontal_period_data,
    horocycle_flow,
    is_isomorphic,
)

from test_ribbon import nabla_assignment, theta_assignment
from test_topology import SEPARATING, TWO_PANTS

F = Fraction


def theta_surface(heights=(1, F(1, 2), 2), twists=None, mode="exact"):
    return build_surface(
        TWO_PANTS, theta_assignment(), heights, twists, mode=mode
    )


def separating_surface(heights=(1, 1, 1), twists=None):
    sa = nabla_assignment(SEPARATING, (2, 2))
    return build_surface(SEPARATING, sa, heights, twists)


def test_area_is_length_dot_height():
    q = theta_surface()
    # curve lengths are (3, 4, 5)
    assert area(q) == 3 * 1 + 4 * F(1, 2) + 5 * 2


def test_normalize_gives_unit_area():
    q = build_surface(
        TWO_PANTS, theta_assignment(), (1, 1, 1), normalize=True
    )
    assert area(q) == 1
    assert q.unit_area
    assert q.heights == (F(1, 12), F(1, 12), F(1, 12))


def test_bad_heights_rejected():
    with pytest.raises(NonPositiveHeight):
        theta_surface(heights=(1, 0, 1))
    with pytest.raises(NonPositiveHeight):
        theta_surface(heights=(1, -2, 1))
    with pytest.raises(NonPositiveHeight):
        theta_surface(heights=(1, 1))


def test_exact_mode_rejects_floats():
    with pytest.raises(ModeMismatch):
        theta_surface(heights=(1.0, 1, 1))
    with pytest.raises(ModeMismatch):
        theta_surface(twists=(0.5, 0, 0))


def test_twists_stored_mod_length():
    q = theta_surface(twists=(3 + F(1, 3), 4, 10))
    assert q.twists == (F(1, 3), 0, 0)


def test_full_twist_is_isomorphic_to_untwisted():
    q0 = theta_surface(twists=(0, 0, 0))
    q1 = theta_surface(twists=(3, 4, 5))
    assert is_isomorphic(q0, q1)


def test_geodesic_flow_scales_exactly():
    q = theta_surface(twists=(1, 2, 3))
    g = geodesic_flow(q, F(2))
    for i in range(3):
        assert g.length_of_curve(i) == 2 * q.length_of_curve(i)
        assert g.height_of_curve(i) == q.height_of_curve(i) / 2
        assert g.twist_of_curve(i) == 2 * q.twist_of_curve(i)
    assert area(g) == area(q)
    back = geodesic_flow(g, F(1, 2))
    assert back.scale == (1, 1)
    assert back.twists == q.twists


def test_geodesic_flow_numeric_mode():
    import math

    q = theta_surface(heights=(1, 0.5, 2), mode="numeric")
    g = geodesic_flow(q, math.log(2))
    assert abs(g.length_of_curve(0) - 6.0) < 1e-12
    assert abs(g.height_of_curve(2) - 1.0) < 1e-12
    assert abs(area(g) - area(q)) <= 1e-12 * area(q)


def test_geodesic_flow_exact_mode_guards():
    q = theta_surface()
    with pytest.raises(ModeMismatch):
        geodesic_flow(q, 0.5)
    with pytest.raises(OutOfRange):
        geodesic_flow(q, 0)


def test_horocycle_advances_twists_only():
    q = theta_surface(twists=(1, 1, 1))
    u = horocycle_flow(q, F(3, 2))
    assert u.heights == q.heights
    assert u.base_lengths == q.base_lengths
    # t_i + s*h_i mod l_i with h = (1, 1/2, 2), l = (3, 4, 5)
    assert u.twists == (
        (1 + F(3, 2)) % 3,
        (1 + F(3, 4)) % 4,
        (1 + 3) % 5,
    )
    assert horocycle_flow(u, -F(3, 2)).twists == q.twists


def test_cylinder_twists_compose_to_horocycle():
    q = theta_surface(twists=(2, 3, F(1, 7)))
    s = F(5, 3)
    step = q
    for i in range(3):
        step = cylinder_twist(step, i, s)
    assert step.twists == horocycle_flow(q, s).twists
    with pytest.raises(BadIndex):
        cylinder_twist(q, 3, 1)


def test_commutation_relation_on_twists():
    rng = CounterRandom(411, "commute")
    for case in range(20):
        heights = [rng.fraction() + 1 for _ in range(3)]
        twists = [rng.fraction() for _ in range(3)]
        q = theta_surface(heights=heights, twists=twists)
        lam = rng.fraction() + F(1, 2)
        s = rng.fraction() - rng.fraction()
        left = geodesic_flow(horocycle_flow(geodesic_flow(q, 1 / lam), s), lam)
        right = horocycle_flow(q, lam * lam * s)
        assert left.twists == right.twists, case
        assert left.scale == right.scale


def test_period_data_of_theta_surface():
    q = theta_surface(twists=(1, 2, 3))
    data = horizontal_period_data(q)
    # each piece is a theta graph with edge lengths {1, 2, 3}
    for p in range(2):
        lengths = sorted(
            data[("edge", p, h)][0]
            for h in (0, 1, 2)
        )
        assert lengths == [1, 2, 3]
        assert all(data[("edge", p, h)][1] == 0 for h in (0, 1, 2))
    assert data[("cross", 0)] == (1, 1)
    assert data[("cross", 1)] == (2, F(1, 2))
    assert data[("cross", 2)] == (3, 2)


def test_period_data_equivariance():
    q = theta_surface(twists=(1, 2, 3))
    u = horocycle_flow(q, F(1, 5))
    du = horizontal_period_data(u)
    dq = horizontal_period_data(q)
    for i in range(3):
        shift = F(1, 5) * q.heights[i]
        assert du[("cross", i)][0] == (dq[("cross", i)][0] + shift) % q.base_lengths[i]
        assert du[("cross", i)][1] == dq[("cross", i)][1]
    g = geodesic_flow(q, F(3))
    dg = horizontal_period_data(g)
    for key, (x, y) in dq.items():
        assert dg[key] == (3 * x, y / 3)


def _left_end(side, circumference):
    if side.kind == "top":
        return (side.x_tail - side.length) % circumference
    return side.x_tail


def test_layout_tiles_each_circle():
    for q in (theta_surface(twists=(1, 2, 3)), separating_surface()):
        seen = set()
        for cyl in q.layout():
            for sides in (cyl.bottom, cyl.top):
                assert sum(s.length for s in sides) == cyl.length
                intervals = sorted(
                    (_left_end(s, cyl.length), s.length) for s in sides
                )
                cursor = intervals[0][0]
                for start, length in intervals:
                    assert start == cursor
                    cursor = start + length
                assert cursor % cyl.length == intervals[0][0]
                for s in sides:
                    key = (s.piece, s.half_edge)
                    assert key not in seen
                    seen.add(key)
        assert len(seen) == sum(g.n_half_edges for g in q.sa.graphs)


def test_flip_bits():
    # both faces of every edge land on bottoms of cylinders here: piece 0
    # carries only bottom faces and piece 1 only top faces.
    q = theta_surface()
    for p in range(2):
        for h, _ in q.sa.graphs[p].edges():
            assert q.edge_flip(p, h) == 1
    # the separating surface self-glues each piece, mixing side kinds:
    # on piece 0 the big face is a bottom, on piece 1 it is a top
    q = separating_surface()
    assert q.edge_flip(0, 0) == 1  # loop (1) bottom, big face bottom
    assert q.edge_flip(0, 2) == 0  # big face bottom, loop (3) top
    assert q.edge_flip(1, 0) == 0  # big face top, loop (1) bottom
    assert q.edge_flip(1, 2) == 1  # big face top, loop (3) top


def test_isomorphic_to_itself_and_not_to_perturbation():
    q = theta_surface(twists=(1, 2, 3))
    assert is_isomorphic(q, q)
    shifted = theta_surface(twists=(1, 2, 3 + F(1, 7)))
    assert not is_isomorphic(q, shifted)
    taller = theta_surface(heights=(1, F(1, 2), F(5, 2)), twists=(1, 2, 3))
    assert not is_isomorphic(q, taller)


def test_isomorphic_under_piece_swap():
    q1 = theta_surface(twists=(1, 2, 3))
    swapped_cfg = type(TWO_PANTS)(
        genus=2,
        curve_names=TWO_PANTS.curve_names,
        pieces=TWO_PANTS.pieces,
        gluing=tuple(((1, s1), (0, s2)) for ((_, s1), (_, s2)) in TWO_PANTS.gluing),
    )
    q2 = build_surface(
        swapped_cfg, theta_assignment(), (1, F(1, 2), 2), (1, 2, 3)
    )
    assert is_isomorphic(q1, q2)


def test_isomorphic_under_cylinder_flip():
    # reversing a gluing pair presents the same cylinder upside down
    flipped = type(TWO_PANTS)(
        genus=2,
        curve_names=TWO_PANTS.curve_names,
        pieces=TWO_PANTS.pieces,
        gluing=(
            (TWO_PANTS.gluing[0][1], TWO_PANTS.gluing[0][0]),
        ) + tuple(TWO_PANTS.gluing[1:]),
    )
    q1 = theta_surface(twists=(1, 2, 3))
    q2 = build_surface(
        flipped, theta_assignment(), (1, F(1, 2), 2), (1, 2, 3)
    )
    assert is_isomorphic(q1, q2)
    assert is_isomorphic(q2, q1)


def test_isomorphism_ignores_scale_bookkeeping():
    # a flowed surface equals one built directly from the scaled data
    q = theta_surface(heights=(1, F(1, 2), 2), twists=(1, 2, 3))
    flowed = geodesic_flow(q, F(2))
    rebuilt = build_surface(
        TWO_PANTS,
        theta_assignment(((6, 8, 10), (6, 8, 10))),
        (F(1, 2), F(1, 4), 1),
        (2, 4, 6),
    )
    assert is_isomorphic(flowed, rebuilt)
    assert is_isomorphic(rebuilt, flowed)
    assert not is_isomorphic(q, rebuilt)


def test_numeric_mode_tolerance():
    q1 = theta_surface(mode="numeric", twists=(1, 2, 3))
    q2 = build_surface(
        TWO_PANTS,
        theta_assignment(),
        (1 + 1e-12, 0.5, 2),
        (1, 2, 3),
        mode="numeric",
    )
    assert is_isomorphic(q1, q2)
    q3 = build_surface(
        TWO_PANTS,
        theta_assignment(),
        (1 + 1e-3, 0.5, 2),
        (1, 2, 3),
        mode="numeric",
    )
    assert not is_isomorphic(q1, q3)


def test_area_invariance_random_sweep():
    rng = CounterRandom(77, "area")
    for _ in range(25):
        heights = [rng.fraction() + F(1, 3) for _ in range(3)]
        twists = [rng.fraction() for _ in range(3)]
        q = theta_surface(heights=heights, twists=twists)
        a = area(q)
        assert area(geodesic_flow(q, rng.fraction() + 1)) == a
        assert area(horocycle_flow(q, rng.fraction())) == a
