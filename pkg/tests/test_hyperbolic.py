"""Disk-model isometry and geodesic primitives.

Expected values are closed forms computed independently of the library:
distances on the real diameter are log((1+r)/(1-r)), translation lengths are
2*arccosh(|tr|/2), and upper-half-plane test matrices have known axes.
"""

import cmath
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfclass.hyperbolic import (
    LINKED,
    SHARED,
    UNLINKED,
    Geodesic,
    Isometry,
    angle_gap,
    collar_width,
    crossing_parameter,
    disk_distance,
    frame,
    geodesic_distance,
    geodesic_through_points,
    linking,
    normalize_angle,
    point_to_geodesic_distance,
    projection_length,
    scaled_axis,
    scaled_from_isometry,
    scaled_inverse,
    scaled_mul,
    scaled_translation_length,
)

PI = math.pi


def random_isometry(rng: random.Random) -> Isometry:
    b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
    alpha = cmath.rect(math.sqrt(1 + abs(b) ** 2), rng.uniform(0, 2 * PI))
    return Isometry(alpha, b)


isometries = st.builds(
    lambda br, bi, phase: Isometry(
        cmath.rect(math.sqrt(1 + br * br + bi * bi), phase), complex(br, bi)
    ),
    st.floats(-3, 3),
    st.floats(-3, 3),
    st.floats(0, 2 * PI),
)


class TestIsometryAlgebra:
    def test_identity_action(self):
        e = Isometry.identity()
        assert e.apply(0.3 + 0.1j) == pytest.approx(0.3 + 0.1j)
        assert e.is_identity()

    @given(isometries, isometries)
    @settings(max_examples=60, deadline=None)
    def test_composition_matches_pointwise(self, f, g):
        z = 0.23 - 0.41j
        assert (f * g).apply(z) == pytest.approx(f.apply(g.apply(z)), abs=1e-9)

    @given(isometries)
    @settings(max_examples=60, deadline=None)
    def test_inverse(self, f):
        z = -0.5 + 0.12j
        assert f.inverse().apply(f.apply(z)) == pytest.approx(z, abs=1e-9)
        comp = f * f.inverse()
        assert comp.is_identity(tol=1e-9)

    @given(isometries, isometries, isometries)
    @settings(max_examples=40, deadline=None)
    def test_associativity(self, f, g, h):
        lhs = (f * g) * h
        rhs = f * (g * h)
        # rounding in the matrix products is relative to the entry size
        assert lhs.alpha == pytest.approx(rhs.alpha, rel=1e-9, abs=1e-9)
        assert lhs.beta == pytest.approx(rhs.beta, rel=1e-9, abs=1e-9)

    @given(isometries)
    @settings(max_examples=60, deadline=None)
    def test_unit_determinant_and_circle_preservation(self, f):
        assert abs(f.alpha) ** 2 - abs(f.beta) ** 2 == pytest.approx(1.0, abs=1e-10)
        for t in (0.0, 1.0, 2.5, 4.0):
            w = f.apply(cmath.exp(1j * t))
            assert abs(w) == pytest.approx(1.0, abs=1e-10)

    def test_reversing_composition_rule(self):
        r = Isometry(1.0, 0.0, reversing=True)  # z -> conj(z)
        f = Isometry.rotation(0.7)
        z = 0.3 + 0.2j
        assert (f * r).apply(z) == pytest.approx(f.apply(z.conjugate()))
        assert (r * f).apply(z) == pytest.approx(f.apply(z).conjugate())
        assert (r * r).is_identity()
        assert (f * r).reversing and not (f * r * r).reversing

    def test_reversing_inverse(self):
        g = Isometry.real_translation(0.8) * Isometry(1.0, 0.0, reversing=True)
        comp = g * g.inverse()
        assert comp.is_identity(tol=1e-9)


class TestClassification:
    def test_rotation_is_elliptic(self):
        c = Isometry.rotation(1.1).classify()
        assert c.kind == "elliptic"
        assert c.fixed_point == pytest.approx(0.0)
        assert c.rotation_angle == pytest.approx(1.1)

    def test_translation_is_hyperbolic_with_length(self):
        # d(0, T(0)) with T(0) = tanh(t/2): the translation length along the axis
        t = 1.75
        c = Isometry.real_translation(t).classify()
        assert c.kind == "hyperbolic"
        assert c.translation_length == pytest.approx(t, abs=1e-12)
        assert c.attracting == pytest.approx(0.0, abs=1e-9)
        assert angle_gap(c.repelling, PI) < 1e-9

    def test_trace_three_length(self):
        # |tr| = 3 gives 2*arccosh(1.5) = 1.9248473002384139
        g = Isometry.from_uhp_matrix([[3.0, -1.0], [1.0, 0.0]])
        assert abs(g.trace) == pytest.approx(3.0)
        assert g.translation_length() == pytest.approx(1.9248473002384139, abs=1e-12)

    def test_parabolic(self):
        g = Isometry.from_uhp_matrix([[1.0, 1.0], [0.0, 1.0]])  # fixes infinity
        c = g.classify()
        assert c.kind == "parabolic"
        # infinity maps to the point 1 = angle 0 under the Cayley map
        assert angle_gap(c.fixed_angle, 0.0) < 1e-9

    def test_identity_kind(self):
        assert Isometry.identity().classify().kind == "identity"
        minus_id = Isometry.from_uhp_matrix([[-1.0, 0.0], [0.0, -1.0]])
        assert minus_id.classify().kind == "identity"

    def test_reversing_never_classified(self):
        r = Isometry(1.0, 0.0, reversing=True)
        with pytest.raises(ValueError):
            r.classify()

    def test_uhp_axis_endpoints(self):
        # diag(e, 1/e) translates the UHP axis (0, inf); Cayley sends
        # 0 -> -1 (angle pi) and inf -> 1 (angle 0), attracting end inf.
        g = Isometry.from_uhp_matrix([[math.e, 0.0], [0.0, 1.0 / math.e]])
        att, rep = g.fixed_boundary_points()
        assert angle_gap(att, 0.0) < 1e-9
        assert angle_gap(rep, PI) < 1e-9
        assert g.translation_length() == pytest.approx(2.0)

    @given(isometries)
    @settings(max_examples=40, deadline=None)
    def test_classification_is_conjugation_invariant(self, h):
        g = Isometry.real_translation(1.3)
        conj = h * g * h.inverse()
        c = conj.classify()
        assert c.kind == "hyperbolic"
        assert c.translation_length == pytest.approx(1.3, abs=1e-8)

    def test_axis_conjugation_covariance(self):
        rng = random.Random(7)
        g = Isometry.real_translation(0.9)
        for _ in range(25):
            h = random_isometry(rng)
            moved = (h * g * h.inverse()).axis()
            expect = h.apply_geodesic(g.axis())
            assert moved == expect


class TestDistances:
    def test_distance_on_real_diameter(self):
        # d(0, r) = log((1+r)/(1-r))
        for r in (0.1, 0.5, 0.9):
            assert disk_distance(0.0, r) == pytest.approx(math.log((1 + r) / (1 - r)))

    def test_distance_symmetric_and_invariant(self):
        rng = random.Random(3)
        z, w = 0.3 + 0.2j, -0.1 - 0.55j
        d = disk_distance(z, w)
        assert disk_distance(w, z) == pytest.approx(d)
        for _ in range(20):
            h = random_isometry(rng)
            assert disk_distance(h.apply(z), h.apply(w)) == pytest.approx(d, abs=1e-9)

    def test_point_to_geodesic(self):
        diam = Geodesic(0.0, PI)
        z = 0.3j
        # on the imaginary diameter: distance to the real one is d(0, z)
        assert point_to_geodesic_distance(z, diam) == pytest.approx(disk_distance(0, z))
        assert point_to_geodesic_distance(0.25, diam) == pytest.approx(0.0, abs=1e-12)

    def test_geodesic_distance_concentric(self):
        # UHP semicircles |z|=1 and |z|=R are at distance log R; in the disk
        # they are the images of the real diameter under translations.
        t = 0.85
        g1 = Geodesic(0.0, PI)
        mover = Isometry.rotation(PI / 2) * Isometry.real_translation(t) * Isometry.rotation(-PI / 2)
        g2 = mover.apply_geodesic(g1)
        assert geodesic_distance(g1, g2) == pytest.approx(t, abs=1e-9)

    def test_crossing_distance_zero(self):
        assert geodesic_distance(Geodesic(0.0, PI), Geodesic(PI / 2, 3 * PI / 2)) == 0.0

    def test_projection_length_shared_endpoint_is_infinite(self):
        g1 = Geodesic(0.0, PI)
        g2 = Geodesic(0.0, PI / 2)
        assert projection_length(g1, g2) == math.inf
        assert linking(g1, g2) == SHARED

    def test_projection_of_crossing_segment(self):
        # perpendicular diameters: shadow is infinite (they cross)
        assert projection_length(Geodesic(0, PI), Geodesic(PI / 2, 3 * PI / 2)) == math.inf

    def test_collar_width_formula(self):
        for length in (0.5, 2.0, 6.0):
            eps = collar_width(length)
            assert math.sinh(eps) * math.sinh(length / 2) == pytest.approx(1.0)


class TestLinkingAndFrames:
    def test_linking_basic(self):
        assert linking(Geodesic(0, PI), Geodesic(PI / 2, 3 * PI / 2)) == LINKED
        assert linking(Geodesic(0, PI / 2), Geodesic(PI, 3 * PI / 2)) == UNLINKED
        assert linking(Geodesic(0, PI), Geodesic(0, PI / 2)) == SHARED

    def test_linking_symmetric(self):
        g1, g2 = Geodesic(0.3, 2.0), Geodesic(1.0, 4.0)
        assert linking(g1, g2) == linking(g2, g1) == LINKED

    @given(isometries)
    @settings(max_examples=40, deadline=None)
    def test_linking_invariant(self, h):
        pairs = [
            (Geodesic(0, PI), Geodesic(PI / 2, 3 * PI / 2)),
            (Geodesic(0, PI / 2), Geodesic(PI, 3 * PI / 2)),
            (Geodesic(0.5, 1.0), Geodesic(0.7, 5.0)),
        ]
        for g1, g2 in pairs:
            assert linking(h.apply_geodesic(g1), h.apply_geodesic(g2)) == linking(g1, g2)

    def test_frame_sends_endpoints_to_diameter(self):
        rng = random.Random(11)
        for _ in range(40):
            t1 = rng.uniform(0, 2 * PI)
            t2 = normalize_angle(t1 + rng.uniform(0.05, 2 * PI - 0.05))
            f = frame(t1, t2)
            assert angle_gap(f.apply_angle(t1), PI) < 1e-9
            assert angle_gap(f.apply_angle(t2), 0.0) < 1e-9

    def test_crossing_parameter_translation(self):
        # moving the crossing geodesic along the axis shifts the parameter
        axis = Geodesic(0.0, PI)
        cross = Geodesic(PI / 2, 3 * PI / 2)
        t0 = crossing_parameter(axis, cross)
        step = Isometry.real_translation(0.6)
        t1 = crossing_parameter(axis, step.apply_geodesic(cross))
        assert abs(abs(t1 - t0) - 0.6) < 1e-9

    def test_geodesic_through_points(self):
        g = geodesic_through_points(0.3j, -0.3j)
        assert angle_gap(g.theta1, PI / 2) < 1e-9 or angle_gap(g.theta2, PI / 2) < 1e-9
        z1, z2 = 0.2 + 0.1j, -0.4 + 0.3j
        g2 = geodesic_through_points(z1, z2)
        assert point_to_geodesic_distance(z1, g2) < 1e-9
        assert point_to_geodesic_distance(z2, g2) < 1e-9

    def test_reflection_fixes_geodesic(self):
        g = Geodesic(0.4, 2.2)
        r = Isometry.reflection(g)
        assert r.reversing
        assert angle_gap(r.apply_angle(g.theta1), g.theta1) < 1e-9
        assert angle_gap(r.apply_angle(g.theta2), g.theta2) < 1e-9
        assert (r * r).is_identity(tol=1e-9)
        # reflection swaps the sides: distance is preserved
        z = 0.1 + 0.5j
        assert point_to_geodesic_distance(r.apply(z), g) == pytest.approx(
            point_to_geodesic_distance(z, g), abs=1e-9
        )


class TestScaledMatrices:
    def test_matches_plain_product(self):
        # short enough that the plain product keeps full precision
        rng = random.Random(5)
        gens = [random_isometry(rng) for _ in range(4)]
        word = [rng.randrange(4) for _ in range(10)]
        plain = Isometry.identity()
        scaled = scaled_from_isometry(Isometry.identity())
        for i in word:
            plain = plain * gens[i]
            scaled = scaled_mul(scaled, scaled_from_isometry(gens[i]))
        if abs(plain.trace) > 2.0:
            assert scaled_translation_length(scaled) == pytest.approx(
                plain.translation_length(), rel=1e-9
            )
            att, rep = scaled_axis(scaled)
            eatt, erep = plain.fixed_boundary_points()
            assert angle_gap(att, eatt) < 1e-8
            assert angle_gap(rep, erep) < 1e-8

    def test_survives_huge_words(self):
        g = scaled_from_isometry(Isometry.real_translation(2.0))
        h = scaled_from_isometry(
            Isometry.rotation(1.0) * Isometry.real_translation(1.5) * Isometry.rotation(-1.0)
        )
        m = scaled_from_isometry(Isometry.identity())
        for _ in range(2000):
            m = scaled_mul(m, g)
            m = scaled_mul(m, h)
        # translation length grows linearly-ish, entries would be e^(thousands)
        length = scaled_translation_length(m)
        assert 2000.0 < length < 20000.0
        att, rep = scaled_axis(m)
        assert 0.0 <= att < 2 * PI and 0.0 <= rep < 2 * PI

    def test_scaled_inverse(self):
        g = scaled_from_isometry(
            Isometry.rotation(0.3) * Isometry.real_translation(3.0)
        )
        prod = scaled_mul(g, scaled_inverse(g))
        a, b, logs = prod
        assert abs(b) < 1e-12
        assert logs == pytest.approx(0.0, abs=1e-12)
