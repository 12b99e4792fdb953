"""Tests for the trichotomy classifier.

Frozen values come from the SL(2,Z) model of the once-punctured torus:
the homology matrix determines the type (|trace| < 2 elliptic hence
periodic, = 2 parabolic hence reducible unless +-identity, > 2 hyperbolic
hence pseudo-Anosov), elliptic orders divide 12 in SL(2,Z), and the twist
Ta*Tb^-1 has dilatation (3+sqrt(5))/2.  Genus-2 splits are checked
against cut-surface arithmetic: a nonseparating cut trades one genus for
two boundary circles, a separating cut splits the genus.
"""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from surfclass.classify import (
    Budgets,
    INDETERMINATE,
    PERIODIC,
    PSEUDO_ANOSOV,
    REDUCIBLE,
    classify,
    component_split,
    default_filling_system,
    filling_certificate,
    periodic_order,
    round_sig,
    _component_return_times,
    _growth_certificate,
    _suggested_candidates,
)
from surfclass.curves import (
    CurveClass,
    geometric_intersection,
    torus_slope_word,
)
from surfclass.mapping import build_mapping_class, dehn_twist, identity_class
from surfclass.surfaces import genus_two_closed, once_punctured_torus

PA_DILATATION = (3.0 + math.sqrt(5.0)) / 2.0


@pytest.fixture(scope="module")
def torus():
    return once_punctured_torus()


@pytest.fixture(scope="module")
def genus2():
    return genus_two_closed()


@pytest.fixture(scope="module")
def screen():
    return Budgets.screen_profile()


@pytest.fixture(scope="module")
def g2_budgets():
    return Budgets(max_word_length=4, max_period=6)


# ---------------------------------------------------------------------------
# slope words and homology suggestions


class TestSlopeWords:
    def test_generators(self, torus):
        assert torus_slope_word(1, 0) == "a"
        assert torus_slope_word(0, 1) == "b"
        assert torus_slope_word(1, 1) == "ab"
        assert torus_slope_word(2, 1) == "aab"

    def test_intersection_determinant(self, torus):
        slopes = [(1, 0), (0, 1), (1, 1), (2, 1), (1, -2), (3, 2), (-5, 3)]
        for p, q in slopes:
            for r, s in slopes:
                c1 = CurveClass.from_word(torus, torus_slope_word(p, q))
                c2 = CurveClass.from_word(torus, torus_slope_word(r, s))
                assert geometric_intersection(c1, c2) == abs(p * s - q * r)

    def test_rejects_imprimitive(self):
        with pytest.raises(ValueError):
            torus_slope_word(2, 4)
        with pytest.raises(ValueError):
            torus_slope_word(0, 0)

    def test_twist_power_suggests_its_core(self, torus):
        mc = build_mapping_class(torus, "Ta^3")
        words = {c.word for c in _suggested_candidates(torus, mc, 12)}
        assert CurveClass.from_word(torus, "a").word in words

    def test_conjugated_twist_suggests_moved_slope(self, torus):
        g = build_mapping_class(torus, "Tb*Ta*Tb")
        mc = g.inverse().then(build_mapping_class(torus, "Ta")).then(g)
        target = g.push_forward(CurveClass.from_word(torus, "a"))
        words = {c.word for c in _suggested_candidates(torus, mc, 12)}
        assert target.word in words

    def test_elliptic_suggests_nothing(self, torus):
        mc = build_mapping_class(torus, "Ta*Tb")
        assert _suggested_candidates(torus, mc, 12) == []


# ---------------------------------------------------------------------------
# filling systems


class TestFillingSystem:
    def test_torus_default(self, torus):
        fs = default_filling_system(torus)
        assert [c.word for c in fs.sigma] == ["A"]
        assert [c.word for c in fs.sigma_prime] == ["B"]
        assert fs.crossings == 1
        assert fs.info["disk_faces"] == 0  # chi = -1 plus one crossing
        assert fs.info["faces"] == 1  # the once-punctured square
        assert fs.info["homology_rank"] == 2

    def test_genus2_default_certified(self, genus2):
        fs = default_filling_system(genus2, max_word_length=4)
        assert fs is not None
        assert fs.crossings >= 3  # a filled closed surface needs chi+V >= 1
        assert fs.info["disk_faces"] >= 1
        assert fs.info["homology_rank"] == 4

    def test_rejects_non_crossing_pair(self, torus):
        a = CurveClass.from_word(torus, "a")
        ok, info = filling_certificate(torus, [a], [a])
        assert not ok
        assert info["disk_faces"] < 0

    def test_rejects_disconnected_union(self, genus2):
        a = CurveClass.from_word(genus2, "a")
        b = CurveClass.from_word(genus2, "b")
        c = CurveClass.from_word(genus2, "c")
        d = CurveClass.from_word(genus2, "d")
        # two handle-local crossing pairs: the union misses the middle
        ok, info = filling_certificate(genus2, [a, c], [b, d])
        assert not ok

    def test_periodic_orders(self, torus):
        fs = default_filling_system(torus)
        assert periodic_order(torus, identity_class(torus), fs) == 1
        assert periodic_order(torus, build_mapping_class(torus, "Ta*Tb"), fs) == 6
        hyper = build_mapping_class(torus, "Ta*Tb*Ta*Tb*Ta*Tb")
        assert periodic_order(torus, hyper, fs) == 2
        # a twist never fixes the dual curve
        assert periodic_order(torus, build_mapping_class(torus, "Ta"), fs) is None


# ---------------------------------------------------------------------------
# component split


class TestComponentSplit:
    def test_empty_gamma_is_ambient(self, torus):
        regions = component_split(torus, [])
        assert len(regions) == 1
        r = regions[0]
        assert (r.genus, r.boundary, r.cusps) == (1, 0, 1)

    def test_torus_nonseparating_cut(self, torus):
        gamma = [CurveClass.from_word(torus, "a")]
        regions = component_split(torus, gamma)
        assert len(regions) == 1
        r = regions[0]
        assert (r.genus, r.boundary, r.cusps) == (0, 2, 1)
        assert r.rim == ["A", "A"]
        assert r.members == []  # every other slope crosses a
        area = 2.0 * math.pi * (2 * r.genus - 2 + r.boundary + r.cusps)
        assert area == pytest.approx(2.0 * math.pi)

    def test_genus2_separating_cut(self, genus2):
        gamma = [CurveClass.from_word(genus2, "ABab")]
        regions = component_split(genus2, gamma, max_word_length=4)
        assert len(regions) == 2
        for r in regions:
            assert (r.genus, r.boundary, r.cusps) == (1, 1, 0)
            assert r.rim == ["ABab"]
            assert r.members  # each handle keeps its catalog curves
        handle_words = [{m.word for m in r.members} for r in regions]
        assert any("A" in words for words in handle_words)
        assert any("C" in words for words in handle_words)

    def test_genus2_two_nonseparating_cuts(self, genus2):
        gamma = [CurveClass.from_word(genus2, w) for w in ("A", "C")]
        regions = component_split(genus2, gamma, max_word_length=4)
        assert len(regions) == 1
        r = regions[0]
        assert (r.genus, r.boundary, r.cusps) == (0, 4, 0)

    def test_genus2_mixed_cuts(self, genus2):
        gamma = [CurveClass.from_word(genus2, w) for w in ("A", "ABab")]
        regions = component_split(genus2, gamma, max_word_length=4)
        signatures = sorted((r.genus, r.boundary, r.cusps) for r in regions)
        assert signatures == [(0, 3, 0), (1, 1, 0)]
        total = sum(2.0 * math.pi * (2 * r.genus - 2 + r.boundary + r.cusps)
                    for r in regions)
        assert total == pytest.approx(genus2.area())

    def test_return_times_trivial_for_fixed_pieces(self, genus2):
        gamma = [CurveClass.from_word(genus2, "ABab")]
        regions = component_split(genus2, gamma, max_word_length=4)
        mc = build_mapping_class(genus2, "Tsep")
        assert _component_return_times(genus2, mc, regions) == [1, 1]


# ---------------------------------------------------------------------------
# verdicts on the torus


class TestPeriodicVerdicts:
    def test_identity(self, torus, screen):
        v = classify(torus, identity_class(torus), screen)
        assert v.kind == PERIODIC
        assert v.order == 1
        assert v.gamma == ()
        assert any("filling system" in e for e in v.evidence)

    def test_elliptic_order_six(self, torus, screen):
        v = classify(torus, build_mapping_class(torus, "Ta*Tb"), screen)
        assert v.kind == PERIODIC
        assert v.order == 6

    def test_hyperelliptic_order_two(self, torus, screen):
        mc = build_mapping_class(torus, "Ta*Tb*Ta*Tb*Ta*Tb")
        v = classify(torus, mc, screen)
        assert v.kind == PERIODIC
        assert v.order == 2

    def test_inverse_elliptic(self, torus, screen):
        v = classify(torus, build_mapping_class(torus, "Ta*Tb").inverse(),
                     screen)
        assert v.kind == PERIODIC
        assert v.order == 6

    def test_genus2_identity(self, genus2, g2_budgets):
        v = classify(genus2, identity_class(genus2), g2_budgets)
        assert v.kind == PERIODIC
        assert v.order == 1


class TestReducibleVerdicts:
    def test_single_twist(self, torus, screen):
        v = classify(torus, build_mapping_class(torus, "Ta"), screen)
        assert v.kind == REDUCIBLE
        assert [c.word for c in v.gamma] == ["A"]
        assert len(v.components) == 1
        r = v.components[0]
        assert r.signature == (0, 2, 1)
        assert r.area == pytest.approx(2.0 * math.pi)
        assert r.n_s == 1
        assert r.sub_verdict.kind == PERIODIC
        assert r.sub_verdict.order == 1

    def test_twist_power(self, torus, screen):
        v = classify(torus, build_mapping_class(torus, "Ta^4"), screen)
        assert v.kind == REDUCIBLE
        assert [c.word for c in v.gamma] == ["A"]

    def test_conjugated_twist(self, torus, screen):
        v = classify(torus, build_mapping_class(torus, "Tb*Ta*Tb^-1"), screen)
        assert v.kind == REDUCIBLE
        moved = dehn_twist(torus, "b").inverse().push_forward(
            CurveClass.from_word(torus, "a"))
        assert [c.word for c in v.gamma] == [moved.word]

    def test_long_conjugator_beyond_enumeration(self, torus, screen):
        # invariant slope (5, 3): its word has 8 letters, twice the
        # enumeration budget, so only the homology suggestion finds it
        g = build_mapping_class(torus, "Tb*Ta*Tb*Ta*Tb")
        mc = g.inverse().then(build_mapping_class(torus, "Ta")).then(g)
        v = classify(torus, mc, screen)
        assert v.kind == REDUCIBLE
        target = g.push_forward(CurveClass.from_word(torus, "a"))
        assert [c.word for c in v.gamma] == [target.word]
        assert any("homology suggests" in e for e in v.evidence)

    def test_orientation_reversing_on_core(self, torus, screen):
        # -P type: fixes the slope of a but reverses its orientation,
        # so the annular piece returns with order two
        mc = build_mapping_class(torus, "Ta*Tb*Ta*Tb*Ta*Tb*Ta")
        v = classify(torus, mc, screen)
        assert v.kind == REDUCIBLE
        assert [c.word for c in v.gamma] == ["A"]
        assert v.components[0].sub_verdict.order == 2

    def test_genus2_separating_twist(self, genus2, g2_budgets):
        v = classify(genus2, build_mapping_class(genus2, "Tsep"), g2_budgets)
        assert v.kind == REDUCIBLE
        assert [c.word for c in v.gamma] == ["ABab"]
        assert len(v.components) == 2
        for r in v.components:
            assert r.signature == (1, 1, 0)
            assert r.area == pytest.approx(2.0 * math.pi)
            assert r.n_s == 1
            assert r.sub_verdict.kind == PERIODIC
            assert r.sub_verdict.order == 1
        total = sum(r.area for r in v.components)
        assert total == pytest.approx(genus2.area())

    def test_genus2_disjoint_twists(self, genus2, g2_budgets):
        v = classify(genus2, build_mapping_class(genus2, "Ta*Tc"), g2_budgets)
        assert v.kind == REDUCIBLE
        assert sorted(c.word for c in v.gamma) == ["A", "C"]
        assert [r.signature for r in v.components] == [(0, 4, 0)]

    def test_genus2_mixed_twists(self, genus2, g2_budgets):
        v = classify(genus2, build_mapping_class(genus2, "Ta*Tsep"),
                     g2_budgets)
        assert v.kind == REDUCIBLE
        assert sorted(c.word for c in v.gamma) == ["A", "ABab"]
        signatures = sorted(r.signature for r in v.components)
        assert signatures == [(0, 3, 0), (1, 1, 0)]


class TestPseudoAnosovVerdicts:
    def test_full_profile(self, torus):
        mc = build_mapping_class(torus, "Ta*Tb^-1")
        v = classify(torus, mc, Budgets())
        assert v.kind == PSEUDO_ANOSOV
        assert v.dilatation == pytest.approx(PA_DILATATION, abs=1e-3)
        assert v.gamma == ()
        assert v.census == [("punctured_disk", 2), ("punctured_disk", 2)]
        assert any("transverse" in e for e in v.evidence)
        assert any("boundary spot check" in e and "alternate" in e
                   for e in v.evidence)

    def test_screen_profile_kind_only(self, torus, screen):
        v = classify(torus, build_mapping_class(torus, "Ta*Tb^-1"), screen)
        assert v.kind == PSEUDO_ANOSOV
        assert v.dilatation is None
        assert any("screen profile" in e for e in v.evidence)

    def test_inverse_same_dilatation(self, torus):
        mc = build_mapping_class(torus, "Ta*Tb^-1")
        v1 = classify(torus, mc, Budgets())
        v2 = classify(torus, mc.inverse(), Budgets())
        assert v2.kind == PSEUDO_ANOSOV
        assert v2.dilatation == pytest.approx(v1.dilatation, abs=1e-3)

    def test_conjugation_preserves_dilatation(self, torus):
        f = build_mapping_class(torus, "Ta*Tb^-1")
        g = build_mapping_class(torus, "Tb*Ta*Ta")
        conj = g.inverse().then(f).then(g)
        v = classify(torus, conj, Budgets())
        assert v.kind == PSEUDO_ANOSOV
        assert v.dilatation == pytest.approx(PA_DILATATION, abs=1e-3)

    def test_cubed_twist_pair(self, torus):
        mc = build_mapping_class(torus, "Ta*Tb^-1*Ta*Tb^-1*Ta*Tb^-1")
        v = classify(torus, mc, Budgets())
        assert v.kind == PSEUDO_ANOSOV
        assert v.dilatation == pytest.approx(PA_DILATATION ** 3, rel=1e-3)


class TestIndeterminate:
    def test_starved_period_budget_conflicts(self, torus):
        # with max_period 1 every elliptic seed looks aperiodic, but the
        # growth data stays polynomial: conflict, never a guess
        tight = Budgets(max_period=1, screen=True)
        v = classify(torus, build_mapping_class(torus, "Ta*Tb"), tight)
        assert v.kind == INDETERMINATE
        assert any("conflicting evidence" in e for e in v.evidence)

    def test_starved_full_profile_sees_orbit_close(self, torus):
        tight = Budgets(max_period=1, boundary_check=False)
        v = classify(torus, build_mapping_class(torus, "Ta*Tb"), tight)
        assert v.kind == INDETERMINATE
        assert any("closes" in e for e in v.evidence)


# ---------------------------------------------------------------------------
# serialization


class TestJson:
    def test_fixed_key_set(self, torus, screen):
        v = classify(torus, build_mapping_class(torus, "Ta"), screen)
        d = v.to_dict()
        assert list(d) == ["kind", "gamma", "components", "evidence",
                           "budgets"]
        comp = d["components"][0]
        assert list(comp) == ["signature", "area", "n_s", "boundary",
                              "curves", "verdict"]
        assert comp["verdict"]["kind"] == PERIODIC

    def test_optional_fields(self, torus, screen):
        vp = classify(torus, build_mapping_class(torus, "Ta*Tb"), screen)
        assert "order" in vp.to_dict()
        assert "dilatation" not in vp.to_dict()
        vpa = classify(torus, build_mapping_class(torus, "Ta*Tb^-1"),
                       Budgets())
        assert "dilatation" in vpa.to_dict()
        assert "order" not in vpa.to_dict()

    def test_deterministic_bytes(self, torus, screen):
        j1 = classify(torus, build_mapping_class(torus, "Ta"), screen).to_json()
        j2 = classify(torus, build_mapping_class(torus, "Ta"), screen).to_json()
        assert j1 == j2
        assert json.loads(j1)["kind"] == REDUCIBLE

    def test_round_sig(self):
        assert round_sig(math.pi, 12) == 3.14159265359
        assert round_sig(0.0) == 0.0
        assert round_sig(2.0 * math.pi) == 6.28318530718


# ---------------------------------------------------------------------------
# agreement with the homology oracle


TWIST_MATS = {
    "Ta": np.array([[1, 1], [0, 1]]),
    "TA": np.array([[1, -1], [0, 1]]),
    "Tb": np.array([[1, 0], [-1, 1]]),
    "TB": np.array([[1, 0], [1, 1]]),
}
TWIST_INV = {"Ta": "TA", "TA": "Ta", "Tb": "TB", "TB": "Tb"}
GRAMMAR = {"Ta": "Ta", "TA": "Ta^-1", "Tb": "Tb", "TB": "Tb^-1"}


def _oracle_kind(factors):
    m = np.eye(2, dtype=int)
    for f in factors:
        m = m @ TWIST_MATS[f]
    t = abs(int(m[0, 0] + m[1, 1]))
    if t < 2:
        return PERIODIC
    if t > 2:
        return PSEUDO_ANOSOV
    if np.array_equal(m, np.eye(2, dtype=int)) or np.array_equal(
            m, -np.eye(2, dtype=int)):
        return PERIODIC
    return REDUCIBLE


_ORACLE_TORUS = None


def _oracle_torus():
    # hypothesis cannot take pytest fixtures; share one surface so the
    # enumeration cache survives across examples
    global _ORACLE_TORUS
    if _ORACLE_TORUS is None:
        _ORACLE_TORUS = once_punctured_torus()
    return _ORACLE_TORUS


class TestOracleAgreement:
    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.sampled_from(sorted(TWIST_MATS)), min_size=0,
                    max_size=5))
    def test_kind_matches_trace_oracle(self, factors):
        reduced = []
        for f in factors:
            if reduced and reduced[-1] == TWIST_INV[f]:
                reduced.pop()
            else:
                reduced.append(f)
        torus = _oracle_torus()
        grammar = "*".join(GRAMMAR[f] for f in reduced)
        mc = (build_mapping_class(torus, grammar) if grammar
              else identity_class(torus))
        v = classify(torus, mc, Budgets.screen_profile())
        assert v.kind == _oracle_kind(reduced)
