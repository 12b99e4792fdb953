"""Catalog surfaces: construction invariants, areas, group structure.

Expected areas come from the Gauss-Bonnet formula 2*pi*(2g - 2 + b + c),
computed in tests/oracles.py.  End lengths of pants are pinned to the values
requested in Fenchel-Nielsen coordinates; the construction is independent of
the tests (inversive-distance solve), so agreement is a real check.
"""

import math
import random

import numpy as np
import pytest

from oracles import area_formula
from surfclass.surfaces import (
    Signature,
    SpecFileError,
    UnsupportedSignatureError,
    once_punctured_torus,
    one_holed_torus,
    pants_surface,
    parse_surface_spec,
    surface_from_signature,
)

AREA_TOL = 1e-6


class TestSignature:
    def test_str(self):
        assert str(Signature(2, 0, 0)) == "(g=2, b=0, c=0)"

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            Signature(-1, 0, 3)

    def test_non_standard_rejected(self):
        # the twice-punctured sphere carries no complete hyperbolic metric
        with pytest.raises(ValueError):
            Signature(0, 0, 2)

    def test_crosscaps_reserved(self):
        with pytest.raises(UnsupportedSignatureError):
            Signature(1, 0, 1, crosscaps=1)


class TestCatalogAreas:
    def test_punctured_torus(self, torus):
        assert abs(torus.area() - area_formula(1, 0, 1)) < AREA_TOL

    def test_punctured_torus_alt_metric(self, torus_alt):
        # area is a topological invariant: same value at other FN coordinates
        assert abs(torus_alt.area() - area_formula(1, 0, 1)) < AREA_TOL

    def test_thrice_punctured_sphere(self, sphere3):
        assert abs(sphere3.area() - area_formula(0, 0, 3)) < AREA_TOL

    def test_four_punctured_sphere(self, sphere4):
        assert abs(sphere4.area() - area_formula(0, 0, 4)) < AREA_TOL

    def test_genus_two(self, genus2):
        assert abs(genus2.area() - area_formula(2, 0, 0)) < AREA_TOL

    def test_holed_torus(self, holed):
        assert abs(holed.area() - area_formula(1, 1, 0)) < AREA_TOL

    def test_pants(self, pants):
        assert abs(pants.area() - area_formula(0, 3, 0)) < AREA_TOL


class TestGroupStructure:
    def test_relator_is_identity(self, genus2):
        # the octagon side pairing yields this closing word, not the
        # textbook commutator product; both present the same group
        assert genus2.relator == "abADcdCB"
        assert genus2.element(genus2.relator).is_identity(tol=1e-7)

    def test_torus_cusp_is_commutator(self, torus):
        assert torus.cusp_words == ["abAB"]
        assert torus.element("abAB").classify().kind == "parabolic"

    def test_holed_torus_boundary(self, holed):
        assert holed.boundary_words == ["abAB"]
        assert holed.element("abAB").classify().kind == "hyperbolic"
        assert holed.is_peripheral("abAB")
        assert holed.is_peripheral("BAba")  # reversed orientation
        assert not holed.is_peripheral("a")

    def test_sphere_relations(self, sphere3, sphere4):
        # punctured spheres carry free groups; the last cusp is the product
        assert sphere3.relator is None and sphere4.relator is None
        assert sphere3.cusp_words == ["a", "b", "ab"]
        assert sphere4.cusp_words == ["x", "y", "z", "yzx"]
        for s in (sphere3, sphere4):
            for w in s.cusp_words:
                assert s.element(w).classify().kind == "parabolic"

    def test_scaled_matches_plain_products(self, torus):
        rng = random.Random(7)
        letters = "abAB"
        for _ in range(50):
            w = "".join(rng.choice(letters) for _ in range(rng.randint(1, 10)))
            g = torus.element(w)
            a, b, logs = torus.scaled_element(w)
            scale = math.exp(logs)
            assert abs(a * scale - g.alpha) < 1e-9 * (1 + abs(g.alpha))
            assert abs(b * scale - g.beta) < 1e-9 * (1 + abs(g.beta))

    def test_unknown_symbol_rejected(self, torus):
        with pytest.raises(ValueError, match="unknown generator"):
            torus.element("axb")


class TestDeckBall:
    def test_displacements_consistent(self, torus):
        words, al, be, disp = torus.deck_ball(5.0)
        assert words[0] == "" and disp[0] == 0.0
        assert np.all(disp <= 5.0 + 1e-9)
        # displacement of the origin is 2*asinh(|beta|) for a unit row
        again = 2.0 * np.arcsinh(np.abs(be))
        assert np.max(np.abs(disp - again)) < 1e-9

    def test_ball_monotone(self, torus):
        small = set(torus.deck_ball(4.0)[0])
        large = set(torus.deck_ball(6.0)[0])
        assert small < large

    def test_no_duplicate_elements(self, genus2):
        words, al, be, _ = genus2.deck_ball(4.0)
        pts = sorted(zip(np.round(al.real, 6), np.round(al.imag, 6),
                         np.round(be.real, 6), np.round(be.imag, 6)))
        for p, q in zip(pts, pts[1:]):
            assert p != q

    def test_discreteness_probe(self, torus, genus2):
        # smallest origin displacement = shortest curve through the basepoint
        assert abs(torus.discreteness_probe() - 1.543874) < 1e-5
        assert abs(genus2.discreteness_probe(4.0) - 3.057142) < 1e-5


class TestFenchelNielsen:
    def test_torus_length_coordinate(self, torus, torus_alt):
        assert abs(torus.element("a").translation_length() - 2.0) < 1e-9
        assert abs(torus_alt.element("a").translation_length() - 2.5) < 1e-9

    def test_holed_torus_lengths(self):
        h = one_holed_torus(2.2, 0.3, boundary_length=1.8)
        assert abs(h.element("a").translation_length() - 2.2) < 1e-9
        assert abs(h.element("abAB").translation_length() - 1.8) < 1e-7

    @pytest.mark.parametrize(
        "ends",
        [
            (1.0, 1.2, 1.4),
            (2.0, 2.5, 3.0),
            (0.0, 2.0, 2.0),
            (0.0, 0.0, 1.5),
            (0.3, 0.4, 0.5),
            (5.0, 0.0, 2.0),
            (4.0, 4.0, 0.2),
        ],
    )
    def test_pants_end_lengths(self, ends):
        p = pants_surface(ends)
        got = sorted(
            round(p.element(w).translation_length(), 9) for w in p.boundary_words
        )
        assert got == sorted(round(x, 9) for x in ends if x > 0)
        assert len(p.cusp_words) == sum(1 for x in ends if x == 0)
        assert abs(p.area() - 2 * math.pi) < AREA_TOL

    def test_all_cusp_pants_is_sphere3(self, sphere3):
        assert (sphere3.signature.genus, sphere3.signature.cusps) == (0, 3)
        assert len(sphere3.cusp_words) == 3


class TestCuspCollars:
    def test_torus_collar(self, torus):
        assert len(torus.cusp_collars) == 1
        c = torus.cusp_collars[0]
        assert c.word == "abAB"
        assert c.height > 0.0

    def test_collar_excludes_closed_geodesics(self, torus):
        # the systole stays below the horoball: its lift never reaches height
        axis = torus.curve("a").axis()
        c = torus.cusp_collars[0]
        assert c.max_height_of(axis) < c.height


class TestSignatureDispatch:
    def test_catalog_signatures(self):
        s = surface_from_signature(Signature(1, 0, 1))
        assert s.signature == Signature(1, 0, 1)
        s = surface_from_signature(Signature(0, 2, 1), fn_lengths=[1.0, 2.0])
        assert len(s.boundary_words) == 2 and len(s.cusp_words) == 1

    def test_out_of_catalog(self):
        with pytest.raises(UnsupportedSignatureError):
            surface_from_signature(Signature(3, 0, 0))


class TestSpecParsing:
    def test_round_trip(self):
        text = """
        # a once-punctured torus with custom coordinates
        genus = 1
        cusps = 1
        fn_lengths = 2.5
        fn_twists = 0.7
        twist_Tfoo = ab
        """
        sig, lengths, twists, aliases = parse_surface_spec(text)
        assert sig == Signature(1, 0, 1)
        assert lengths == [2.5] and twists == [0.7]
        assert aliases == {"Tfoo": "ab"}
        s = surface_from_signature(sig, lengths, twists)
        assert abs(s.element("a").translation_length() - 2.5) < 1e-9

    def test_unknown_key(self):
        with pytest.raises(SpecFileError, match="unknown key"):
            parse_surface_spec("genus = 1\nvolume = 3\n")

    def test_bad_integer(self):
        with pytest.raises(SpecFileError, match="must be an integer"):
            parse_surface_spec("genus = one\ncusps = 1\n")

    def test_bad_twist_name(self):
        with pytest.raises(SpecFileError, match="bad twist alias"):
            parse_surface_spec("genus = 1\ncusps = 1\ntwist_1x = ab\n")

    def test_missing_equals(self):
        with pytest.raises(SpecFileError, match="expected"):
            parse_surface_spec("genus 1\n")

    def test_non_standard_signature(self):
        with pytest.raises(SpecFileError):
            parse_surface_spec("genus = 0\ncusps = 2\n")
