"""Finite-type hyperbolic surfaces as Fuchsian groups with fundamental polygons.

A surface is a discrete group of disk isometries together with a fundamental
polygon whose side pairings realize the generators.  The catalog covers:

* once-punctured torus, a one-parameter-family pair (length, twist);
* thrice- and four-punctured spheres (congruence-type parabolic groups);
* the closed genus-2 surface (regular octagon with opposite sides paired);
* the one-holed torus with prescribed boundary length;
* planar surfaces with boundary+cusps = 3 (pants), built from reflections
  in three pairwise disjoint geodesics.

Areas are computed numerically from the polygon's angle defect
((n-2)*pi minus the interior angle sum); no closed formula is consulted.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .hyperbolic import (
    Geodesic,
    Isometry,
    angle_gap,
    disk_distance,
    frame,
    geodesic_distance,
    normalize_angle,
    scaled_mul,
)
from .words import WordCalculus, inverse_word

# horocycle length cutting off the standard cusp neighborhoods
CUSP_HOROCYCLE_LENGTH = 2.0
# extra word-search slack when enumerating displacement balls (BFS prune)
BALL_SLACK = 4.0


class UnsupportedSignatureError(ValueError):
    """Signature is standard but outside the constructible catalog."""


class SpecFileError(ValueError):
    """Malformed surface spec file."""


@dataclass(frozen=True)
class Signature:
    genus: int
    boundary: int
    cusps: int
    crosscaps: int = 0

    def __post_init__(self):
        for name in ("genus", "boundary", "cusps", "crosscaps"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.crosscaps > 0:
            raise UnsupportedSignatureError("nonorientable surfaces (crosscaps > 0) are reserved")
        if self.cusps + self.crosscaps + self.boundary + 2 * self.genus < 3:
            raise ValueError(f"{self} is not standard (no complete hyperbolic metric "
                             "without halfplanes)")

    def __str__(self):
        return f"(g={self.genus}, b={self.boundary}, c={self.cusps})"


# ---------------------------------------------------------------------------
# small geometric helpers


def disk_of_uhp(z: complex) -> complex:
    return (z - 1j) / (z + 1j)


def angle_of_uhp_foot(x: float) -> float:
    if math.isinf(x):
        return 0.0
    return normalize_angle(2.0 * math.atan2(1.0, -x))


def geodesic_through(p1, p2) -> Geodesic:
    """Geodesic through two points, each an interior complex or ('ideal', angle)."""

    def _row(p):
        if isinstance(p, tuple) and p[0] == "ideal":
            u = cmath.exp(1j * p[1])
            return u, 1.0
        return complex(p), 0.5 * (1.0 + abs(p) ** 2)

    z1, s1 = _row(p1)
    z2, s2 = _row(p2)
    det = (z1.conjugate() * z2).imag
    if abs(det) < 1e-13:
        # collinear with the origin: a diameter
        direction = cmath.phase(z2 - z1)
        return Geodesic(direction, direction + math.pi)
    x = (s1 * z2.imag - s2 * z1.imag) / det
    y = (z1.real * s2 - z2.real * s1) / det
    c = complex(x, y)
    ac = abs(c)
    t = math.sqrt(max(ac * ac - 1.0, 0.0))
    u1 = c / ac**2 + 1j * (c / ac) * (t / ac)
    u2 = c / ac**2 - 1j * (c / ac) * (t / ac)
    return Geodesic(cmath.phase(u1), cmath.phase(u2))


def geodesic_intersection_point(g1: Geodesic, g2: Geodesic) -> complex:
    """The interior crossing point of two linked geodesics."""
    f = frame(g1.theta1, g1.theta2)
    from .hyperbolic import uhp_foot

    p = uhp_foot(f.apply_angle(g2.theta1))
    q = uhp_foot(f.apply_angle(g2.theta2))
    if not (min(p, q) < 0.0 < max(p, q)):
        raise ValueError("geodesics do not cross")
    h = math.sqrt(-p * q)
    on_diameter = (h - 1.0) / (h + 1.0)
    return f.inverse().apply(on_diameter)


def common_perpendicular(g1: Geodesic, g2: Geodesic) -> Geodesic:
    """The unique geodesic orthogonal to two disjoint geodesics."""
    f = frame(g1.theta1, g1.theta2)
    from .hyperbolic import uhp_foot

    p = uhp_foot(f.apply_angle(g2.theta1))
    q = uhp_foot(f.apply_angle(g2.theta2))
    if math.isinf(p) or math.isinf(q) or p * q <= 0.0:
        raise ValueError("geodesics are not disjoint; no common perpendicular")
    s = math.sqrt(p * q)
    perp = Geodesic(angle_of_uhp_foot(-s), angle_of_uhp_foot(s))
    finv = f.inverse()
    return finv.apply_geodesic(perp)


def _arc_tangent(g: Geodesic, at: complex, toward) -> complex:
    """Unit tangent of the geodesic at an interior point, oriented toward
    the endpoint `toward` (an angle or an interior point)."""
    u1 = cmath.exp(1j * g.theta1)
    u2 = cmath.exp(1j * g.theta2)
    target = cmath.exp(1j * toward) if isinstance(toward, float) else complex(toward)
    denom = 1.0 + (u1.conjugate() * u2).real
    if abs(denom) < 1e-12:
        t = (u2 - u1) / abs(u2 - u1)  # diameter
    else:
        c = (u1 + u2) / denom
        t = 1j * (at - c)
        t /= abs(t)
    if (t.conjugate() * (target - at)).real < 0.0:
        t = -t
    return t


# ---------------------------------------------------------------------------
# fundamental polygons


@dataclass
class PolygonSide:
    geodesic: Geodesic
    pairing: str | None  # word mapping this side onto its partner, None = free
    label: str


@dataclass
class FundamentalPolygon:
    """Ordered boundary path: vertices[i] -- sides[i] --> vertices[i+1].

    A vertex is an interior complex point or ('ideal', angle).
    """

    vertices: list
    sides: list[PolygonSide]

    def __post_init__(self):
        if len(self.vertices) != len(self.sides):
            raise ValueError("polygon needs one side per vertex (cyclic path)")

    @staticmethod
    def _is_ideal(v) -> bool:
        return isinstance(v, tuple) and v[0] == "ideal"

    def interior_angles(self) -> list[float]:
        n = len(self.vertices)
        angles = []
        for i, v in enumerate(self.vertices):
            if self._is_ideal(v):
                angles.append(0.0)
                continue
            s_in = self.sides[(i - 1) % n]
            s_out = self.sides[i]
            prev_v = self.vertices[(i - 1) % n]
            next_v = self.vertices[(i + 1) % n]
            toward_prev = prev_v[1] if self._is_ideal(prev_v) else prev_v
            toward_next = next_v[1] if self._is_ideal(next_v) else next_v
            t1 = _arc_tangent(s_in.geodesic, v, toward_prev)
            t2 = _arc_tangent(s_out.geodesic, v, toward_next)
            cosang = max(-1.0, min(1.0, (t1.conjugate() * t2).real))
            angles.append(math.acos(cosang))
        return angles

    def area(self) -> float:
        n = len(self.sides)
        return (n - 2) * math.pi - sum(self.interior_angles())


@dataclass
class CuspCollar:
    word: str
    fixed_angle: float
    translation: float  # parabolic shift in the normalized chart
    height: float  # horoball boundary at Im z = height, cusp at infinity
    chart: Isometry = field(repr=False)

    def max_height_of(self, g: Geodesic) -> float:
        """Largest Im z the geodesic reaches in the cusp chart."""
        from .hyperbolic import uhp_foot

        p = uhp_foot(self.chart.apply_angle(g.theta1))
        q = uhp_foot(self.chart.apply_angle(g.theta2))
        if math.isinf(p) or math.isinf(q):
            return math.inf
        return 0.5 * abs(q - p)


def _make_collar(word: str, element: Isometry) -> CuspCollar:
    cls = element.classify()
    if cls.kind != "parabolic":
        raise ValueError(f"cusp word {word!r} is {cls.kind}, not parabolic")
    th = cls.fixed_angle
    chart = frame(normalize_angle(th + math.pi), th)
    conj = chart * element * chart.inverse()
    from .hyperbolic import uhp_point

    moved = uhp_point(conj.apply(0.0))
    if abs(moved.imag - 1.0) > 1e-7:
        raise AssertionError("cusp chart did not normalize the parabolic")
    t = abs(moved.real)
    return CuspCollar(word, th, t, t / CUSP_HOROCYCLE_LENGTH, chart)


# ---------------------------------------------------------------------------
# the surface class


class FiniteTypeSurface:
    """A catalog hyperbolic surface: Fuchsian group + fundamental polygon."""

    def __init__(
        self,
        signature: Signature,
        letters: str,
        generators: dict[str, Isometry],
        polygon: FundamentalPolygon,
        cusp_words: list[str],
        boundary_words: list[str],
        relator: str | None = None,
        fn_params: dict | None = None,
        name: str = "",
    ):
        self.signature = signature
        self.letters = letters
        self.generators = generators
        self.polygon = polygon
        self.cusp_words = list(cusp_words)
        self.boundary_words = list(boundary_words)
        self.relator = relator
        self.fn_params = dict(fn_params or {})
        self.name = name or str(signature)
        self.words = WordCalculus(letters, relator)
        self._iso_cache: dict[str, Isometry] = {}
        self._letter_mats = {}
        for g, iso in generators.items():
            self._letter_mats[g] = (iso.alpha, iso.beta)
            inv = iso.inverse()
            self._letter_mats[g.upper()] = (inv.alpha, inv.beta)
        self._ball_cache = None  # (radius, words, alpha, beta, disp)
        self._check_construction()
        self.cusp_collars = [_make_collar(w, self.element(w)) for w in self.cusp_words]
        self._thick_pts = self._thick_representatives()
        self.thick_diameter = self._compute_thick_diameter()

    def __repr__(self):
        return f"<FiniteTypeSurface {self.name} {self.signature}>"

    # -- group elements

    def element(self, word: str) -> Isometry:
        cached = self._iso_cache.get(word)
        if cached is not None:
            return cached
        out = Isometry.identity()
        for ch in word:
            pair = self._letter_mats.get(ch)
            if pair is None:
                raise ValueError(f"unknown generator symbol {ch!r} (alphabet {self.letters!r})")
            out = out * Isometry(pair[0], pair[1])
        if len(word) <= 24:
            self._iso_cache[word] = out
        return out

    def scaled_element(self, word: str):
        m = (1.0 + 0.0j, 0.0 + 0.0j, 0.0)
        for ch in word:
            pair = self._letter_mats.get(ch)
            if pair is None:
                raise ValueError(f"unknown generator symbol {ch!r}")
            m = scaled_mul(m, (pair[0], pair[1], 0.0))
        return m

    def scaled_prefixes(self, word: str):
        """Scaled products of the proper prefixes: [id, w[:1], ..., w[:n-1]]."""
        out = [(1.0 + 0.0j, 0.0 + 0.0j, 0.0)]
        m = out[0]
        for ch in word[:-1]:
            pair = self._letter_mats[ch]
            m = scaled_mul(m, (pair[0], pair[1], 0.0))
            out.append(m)
        return out

    def conjugacy_normal_form(self, word: str) -> str:
        return self.words.normal_form(word)

    def is_peripheral(self, word: str) -> bool:
        """Conjugate (either orientation) into a cusp or boundary subgroup."""
        w = self.words.normal_form(word)
        if w == "":
            return True
        m = self.scaled_element(w)
        a, _, logs = m
        half_tr = abs(a.real) * math.exp(min(logs, 300.0))
        if abs(half_tr - 1.0) < 1e-7:
            return True  # parabolic: a cusp class
        key = self.words.curve_key(w)
        for bw in self.boundary_words:
            base = self.words.curve_key(bw)
            if key == base:
                return True
            # powers of the boundary up to the length budget
            reps = len(w) // max(len(bw), 1) + 1
            for k in range(2, reps + 1):
                if key == self.words.curve_key(bw * k):
                    return True
        return False

    # -- verification at construction time

    def _check_construction(self):
        if self.relator is not None:
            g = self.element(self.relator)
            if not g.is_identity(tol=1e-7):
                raise AssertionError(f"relator {self.relator} is not the identity: {g!r}")
        for side in self.polygon.sides:
            if side.pairing is None:
                continue
            g = self.element(side.pairing)
            img = g.apply_geodesic(side.geodesic)
            if not any(
                img == other.geodesic for other in self.polygon.sides if other is not side
            ):
                raise AssertionError(
                    f"side pairing {side.pairing!r} does not map the side onto a partner"
                )

    def discreteness_probe(self, radius: float = 5.0, threshold: float = 1e-6) -> float:
        """Smallest positive basepoint displacement over a ball of elements."""
        words, _, _, disp = self.deck_ball(radius)
        nontrivial = [d for w, d in zip(words, disp) if w != ""]
        smallest = min(nontrivial) if nontrivial else math.inf
        if smallest <= threshold:
            raise AssertionError(f"group not discrete at tolerance {threshold}: "
                                 f"element displaces basepoint by {smallest}")
        return float(smallest)

    # -- displacement ball of deck transformations

    def deck_ball(self, radius: float):
        """All group elements moving the origin at most `radius`.

        Returns (words, alpha array, beta array, displacement array), sorted
        by (word length, word) for determinism.  BFS with displacement
        pruning at radius + BALL_SLACK, so elements reachable only through
        longer detours are still found (fellow-traveler slack).
        """
        cache = self._ball_cache
        if cache is not None and cache[0] >= radius:
            _, words, al, be, disp = cache
            mask = disp <= radius + 1e-9
            idx = np.nonzero(mask)[0]
            return [words[i] for i in idx], al[idx], be[idx], disp[idx]

        prune = radius + BALL_SLACK
        letters = sorted(self._letter_mats.keys())
        lmat = {ch: self._letter_mats[ch] for ch in letters}

        def canon_key(a: complex, b: complex):
            parts = (a.real, a.imag, b.real, b.imag)
            for p in parts:
                if abs(p) > 1e-9:
                    if p < 0:
                        a, b = -a, -b
                    break
            n = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
            return (round(a.real / n, 7), round(a.imag / n, 7),
                    round(b.real / n, 7), round(b.imag / n, 7), round(math.log(n), 7))

        seen = {canon_key(1.0 + 0j, 0j): ""}
        result = [("", 1.0 + 0j, 0j, 0.0)]
        frontier = [("", 1.0 + 0j, 0j)]
        while frontier:
            nxt = []
            for word, a, b in frontier:
                last = word[-1] if word else ""
                for ch in letters:
                    if last and ch == inverse_word(last):
                        continue
                    la, lb = lmat[ch]
                    na = a * la + b * lb.conjugate()
                    nb = a * lb + b * la.conjugate()
                    norm = math.sqrt(abs(na) ** 2 - abs(nb) ** 2)
                    na, nb = na / norm, nb / norm
                    d = 2.0 * math.asinh(abs(nb))
                    if d > prune:
                        continue
                    key = canon_key(na, nb)
                    if key in seen:
                        continue
                    nw = word + ch
                    seen[key] = nw
                    nxt.append((nw, na, nb))
                    result.append((nw, na, nb, d))
            frontier = nxt
        result.sort(key=lambda r: (len(r[0]), r[0]))
        words = [r[0] for r in result]
        al = np.array([r[1] for r in result], dtype=complex)
        be = np.array([r[2] for r in result], dtype=complex)
        disp = np.array([r[3] for r in result], dtype=float)
        self._ball_cache = (radius, words, al, be, disp)
        mask = disp <= radius + 1e-9
        idx = np.nonzero(mask)[0]
        return [words[i] for i in idx], al[idx], be[idx], disp[idx]

    # -- area and thick part

    def area(self) -> float:
        return self.polygon.area()

    def _thick_representatives(self) -> list[complex]:
        pts = []
        n = len(self.polygon.vertices)
        for i, v in enumerate(self.polygon.vertices):
            if not FundamentalPolygon._is_ideal(v):
                pts.append(complex(v))
                continue
            th = v[1]
            # truncate the two adjacent sides at a fixed height in a chart
            # sending this ideal vertex to infinity
            chart = frame(normalize_angle(th + math.pi), th)
            from .hyperbolic import uhp_foot

            for side in (self.polygon.sides[(i - 1) % n], self.polygon.sides[i]):
                g = side.geodesic
                feet = sorted(
                    (uhp_foot(chart.apply_angle(g.theta1)),
                     uhp_foot(chart.apply_angle(g.theta2))),
                    key=abs,
                )
                x = feet[0]  # the finite foot; the other is ~infinity
                if math.isinf(x):
                    continue
                pts.append(chart.inverse().apply(disk_of_uhp(complex(x, 1.0))))
        return pts

    def cusp_collars_by_angle(self, th: float):
        return [c for c in getattr(self, "cusp_collars", []) if angle_gap(c.fixed_angle, th) < 1e-7]

    def _compute_thick_diameter(self) -> float:
        pts = self._thick_pts
        best = 1.0
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                best = max(best, disk_distance(pts[i], pts[j]))
        return best

    # -- curve-level operations (delegated; see curves.py)

    def curve(self, word: str):
        from . import curves

        return curves.CurveClass.from_word(self, word)

    def enumerate_simple_closed_geodesics(self, max_word_length: int):
        from . import curves

        return curves.enumerate_simple_closed_geodesics(self, max_word_length)

    def default_twist_aliases(self) -> dict[str, str]:
        """T<letter> for every generator that is a simple essential curve."""
        from . import curves

        aliases = {}
        for g in self.letters:
            try:
                c = curves.CurveClass.from_word(self, g)
            except ValueError:
                continue
            if not self.is_peripheral(g) and c.is_simple():
                aliases[f"T{g}"] = g
        for g, h in itertools.combinations(self.letters, 2):
            w = g + h
            try:
                c = curves.CurveClass.from_word(self, w)
            except ValueError:
                continue
            if not self.is_peripheral(w) and c.is_simple():
                aliases[f"T{g}{h}"] = w
        split = getattr(self, "handle_split", None)
        if split is not None:
            aliases["Tsep"] = split["curve"]
        return aliases


# ---------------------------------------------------------------------------
# catalog constructions


def once_punctured_torus(length: float = 2.0, twist: float = 0.0) -> FiniteTypeSurface:
    """Once-punctured torus with the two core curves crossing once.

    Built in the half-plane chart: the first generator is the diagonal
    translation of length `length`; the second has cosh of its half-offset
    pinned so the commutator is parabolic (the cusp).  The `twist` slides the
    second handle along the first core curve.
    """
    if length <= 0:
        raise ValueError("length must be positive")
    t = math.exp(0.5 * length)
    s = 1.0 / math.sinh(0.5 * length)
    c0 = 1.0 / math.tanh(0.5 * length)
    e = math.exp(0.5 * twist)
    a = Isometry.from_uhp_matrix([[t, 0.0], [0.0, 1.0 / t]])
    b = Isometry.from_uhp_matrix([[c0 * e, s * e], [s / e, c0 / e]])
    gens = {"a": a, "b": b}

    def elem(word):
        out = Isometry.identity()
        for ch in word:
            g = gens[ch.lower()]
            out = out * (g if ch.islower() else g.inverse())
        return out

    commutator = elem("abAB")
    if abs(abs(commutator.trace) - 2.0) > 1e-9:
        raise AssertionError("commutator is not parabolic; construction broken")
    v4 = elem("BAba").classify().fixed_angle
    v1 = b.apply_angle(v4)
    v2 = elem("ab").apply_angle(v4)
    v3 = a.apply_angle(v4)
    verts = {"v1": v1, "v2": v2, "v3": v3, "v4": v4}
    declared = [
        (frozenset(("v4", "v1")), "a"),
        (frozenset(("v3", "v2")), "A"),
        (frozenset(("v4", "v3")), "b"),
        (frozenset(("v1", "v2")), "B"),
    ]
    order = sorted(verts, key=lambda k: verts[k])
    vertices = []
    sides = []
    for i, name in enumerate(order):
        nxt = order[(i + 1) % 4]
        pairing = None
        for vset, word in declared:
            if vset == frozenset((name, nxt)):
                pairing = word
                break
        if pairing is None:
            raise AssertionError("quadrilateral sides do not close up")
        vertices.append(("ideal", verts[name]))
        sides.append(PolygonSide(Geodesic(verts[name], verts[nxt]), pairing, f"{pairing}-side"))
    poly = FundamentalPolygon(vertices, sides)
    return FiniteTypeSurface(
        Signature(1, 0, 1),
        "ab",
        gens,
        poly,
        cusp_words=["abAB"],
        boundary_words=[],
        fn_params={"lengths": [length], "twists": [twist]},
        name="once-punctured torus",
    )


def thrice_punctured_sphere() -> FiniteTypeSurface:
    a = Isometry.from_uhp_matrix([[1.0, 2.0], [0.0, 1.0]])
    b = Isometry.from_uhp_matrix([[1.0, 0.0], [-2.0, 1.0]])
    feet = [-1.0, 0.0, 1.0, math.inf]
    ang = [angle_of_uhp_foot(x) for x in feet]
    vertices = [("ideal", t) for t in ang]
    sides = [
        PolygonSide(Geodesic(ang[0], ang[1]), "B", "B-side"),
        PolygonSide(Geodesic(ang[1], ang[2]), "b", "b-side"),
        PolygonSide(Geodesic(ang[2], ang[3]), "A", "A-side"),
        PolygonSide(Geodesic(ang[3], ang[0]), "a", "a-side"),
    ]
    poly = FundamentalPolygon(vertices, sides)
    return FiniteTypeSurface(
        Signature(0, 0, 3),
        "ab",
        {"a": a, "b": b},
        poly,
        cusp_words=["a", "b", "ab"],
        boundary_words=[],
        name="thrice-punctured sphere",
    )


def four_punctured_sphere() -> FiniteTypeSurface:
    x = Isometry.from_uhp_matrix([[1.0, 4.0], [0.0, 1.0]])
    y = Isometry.from_uhp_matrix([[1.0, 0.0], [-2.0, 1.0]])
    z = Isometry.from_uhp_matrix([[-3.0, 8.0], [-2.0, 5.0]])
    feet = [-1.0, 0.0, 1.0, 2.0, 3.0, math.inf]
    ang = [angle_of_uhp_foot(v) for v in feet]
    vertices = [("ideal", t) for t in ang]
    sides = [
        PolygonSide(Geodesic(ang[0], ang[1]), "Y", "Y-side"),
        PolygonSide(Geodesic(ang[1], ang[2]), "y", "y-side"),
        PolygonSide(Geodesic(ang[2], ang[3]), "Z", "Z-side"),
        PolygonSide(Geodesic(ang[3], ang[4]), "z", "z-side"),
        PolygonSide(Geodesic(ang[4], ang[5]), "X", "X-side"),
        PolygonSide(Geodesic(ang[5], ang[0]), "x", "x-side"),
    ]
    poly = FundamentalPolygon(vertices, sides)
    return FiniteTypeSurface(
        Signature(0, 0, 4),
        "xyz",
        {"x": x, "y": y, "z": z},
        poly,
        cusp_words=["x", "y", "z", "yzx"],
        boundary_words=[],
        name="four-punctured sphere",
    )


def _mobius_two_points(p1: complex, p2: complex, q1: complex, q2: complex) -> Isometry:
    """The orientation-preserving isometry with p1 -> q1, p2 -> q2.

    Requires d(p1, p2) = d(q1, q2)."""

    def norm(u, v):
        m = Isometry(1.0, -u)  # u -> 0
        return Isometry.rotation(-cmath.phase(m.apply(v))) * m

    f1 = norm(p1, p2)
    f2 = norm(q1, q2)
    if abs(abs(f1.apply(p2)) - abs(f2.apply(q2))) > 1e-11:
        raise ValueError("point pairs are not isometric")
    return f2.inverse() * f1


def genus_two_closed() -> FiniteTypeSurface:
    """Closed genus 2: the regular 2pi/8 octagon with sides read a b A B c d C D.

    Side k runs between the vertices at angles (2k-1)pi/8 and (2k+1)pi/8;
    the letter edges pair side 0 with 2, 1 with 3, 4 with 6 and 5 with 7,
    with the orientation forced by mapping the polygon onto the adjacent
    copy.  The resulting one-relator presentation is

        < a, b, c, d | a b A D c d C B >,

    and the relator factors as (abAB) t (cdCD) t^-1 with t = bD.  Hence the
    commutator abAB is a separating simple closed curve whose two handles
    are carried by <a, b> and b <c, d> b^-1; that split is recorded on the
    surface for reduction along the separating curve.
    """
    ch_rho = 1.0 / math.tan(math.pi / 8.0) ** 2
    r_e = math.sqrt((ch_rho - 1.0) / (ch_rho + 1.0))
    w = [r_e * cmath.exp(1j * (2 * k + 1) * math.pi / 8.0) for k in range(8)]
    gens = {
        "a": _mobius_two_points(w[2], w[1], w[7], w[0]),
        "b": _mobius_two_points(w[3], w[2], w[0], w[1]),
        "c": _mobius_two_points(w[6], w[5], w[3], w[4]),
        "d": _mobius_two_points(w[7], w[6], w[4], w[5]),
    }
    pair_words = ["A", "B", "a", "b", "C", "D", "c", "d"]
    labels = ["a", "b", "A", "B", "c", "d", "C", "D"]
    vertices = []
    sides = []
    for k in range(8):
        v1 = w[(k - 1) % 8]
        v2 = w[k]
        vertices.append(v1)
        sides.append(PolygonSide(geodesic_through(v1, v2), pair_words[k], labels[k]))
    poly = FundamentalPolygon(vertices, sides)
    surf = FiniteTypeSurface(
        Signature(2, 0, 0),
        "abcd",
        gens,
        poly,
        cusp_words=[],
        boundary_words=[],
        relator="abADcdCB",
        name="closed genus 2",
    )
    surf.handle_split = {
        "curve": "abAB",
        "piece1": ("a", "b"),
        "piece2": ("c", "d"),
        "piece2_conjugator": "b",
    }
    return surf


def one_holed_torus(length: float = 2.0, twist: float = 0.0,
                    boundary_length: float = 2.0) -> FiniteTypeSurface:
    """Genus 1 with one geodesic boundary circle of the given length."""
    if length <= 0 or boundary_length <= 0:
        raise ValueError("lengths must be positive")
    x = 2.0 * math.cosh(0.5 * length)
    w = 2.0 * math.cosh(0.5 * boundary_length)
    mu2 = (x * x - 2.0 + w) / (x * x - 4.0)
    mu = math.sqrt(mu2)
    nu = math.sqrt(mu2 - 1.0)
    t = math.exp(0.5 * length)
    e = math.exp(0.5 * twist)
    a = Isometry.from_uhp_matrix([[t, 0.0], [0.0, 1.0 / t]])
    b = Isometry.from_uhp_matrix([[mu * e, nu * e], [nu / e, mu / e]])
    gens = {"a": a, "b": b}

    def elem(word):
        out = Isometry.identity()
        for ch in word:
            g = gens[ch.lower()]
            out = out * (g if ch.islower() else g.inverse())
        return out

    k = elem("abAB")
    if abs(abs(k.trace) - w) > 1e-9:
        raise AssertionError("boundary commutator has the wrong length")
    # the four boundary lifts framing the octagon are translates of the
    # vertex-cycle commutator P = b^-1 a^-1 b a; closure uses (ba)^-1(ab) = P^-1
    axis0 = elem("BAba").axis()
    axis_b = b.apply_geodesic(axis0)
    axis_a = a.apply_geodesic(axis0)
    axis_ab = elem("ab").apply_geodesic(axis0)
    axis_ba = elem("ba").apply_geodesic(axis0)
    if not (axis_ab == axis_ba):
        raise AssertionError("boundary lifts do not close up around the handle")
    e34 = common_perpendicular(axis_a, axis0)
    e41 = common_perpendicular(axis0, axis_b)
    e12 = b.apply_geodesic(e34)
    e23 = a.apply_geodesic(e41)
    p1 = geodesic_intersection_point(axis_a, e34)
    p2 = geodesic_intersection_point(axis0, e34)
    p3 = geodesic_intersection_point(axis0, e41)
    p4 = geodesic_intersection_point(axis_b, e41)
    p5 = geodesic_intersection_point(axis_b, e12)
    p6 = geodesic_intersection_point(axis_ab, e12)
    p7 = geodesic_intersection_point(axis_ab, e23)
    p8 = geodesic_intersection_point(axis_a, e23)
    vertices = [p1, p2, p3, p4, p5, p6, p7, p8]
    sides = [
        PolygonSide(e34, "b", "E34"),
        PolygonSide(axis0, None, "boundary-arc"),
        PolygonSide(e41, "a", "E41"),
        PolygonSide(axis_b, None, "boundary-arc"),
        PolygonSide(e12, "B", "E12"),
        PolygonSide(axis_ab, None, "boundary-arc"),
        PolygonSide(e23, "A", "E23"),
        PolygonSide(axis_a, None, "boundary-arc"),
    ]
    arcs = (disk_distance(p2, p3) + disk_distance(p4, p5)
            + disk_distance(p6, p7) + disk_distance(p8, p1))
    if abs(arcs - boundary_length) > 1e-8:
        raise AssertionError(f"boundary arcs sum to {arcs}, wanted {boundary_length}")
    poly = FundamentalPolygon(vertices, sides)
    return FiniteTypeSurface(
        Signature(1, 1, 0),
        "ab",
        gens,
        poly,
        cusp_words=[],
        boundary_words=["abAB"],
        fn_params={"lengths": [length, boundary_length], "twists": [twist]},
        name="one-holed torus",
    )


def pants_surface(lengths: tuple[float, float, float]) -> FiniteTypeSurface:
    """Planar surface with three ends (boundary circles and/or cusps).

    `lengths` are the three end lengths in order; 0 marks a cusp.  Built from
    reflections r1, r2, r3 in three pairwise disjoint geodesics L1, L2, L3
    with d(L_i, L_j) = lengths[k]/2; the surface group is the orientation
    subgroup generated by x = r2 r1 and y = r3 r1, and the ends are the
    classes x ("end 3"), y ("end 2") and x y^-1 ("end 1").
    """
    if len(lengths) != 3 or any(l < 0 for l in lengths):
        raise ValueError("need three nonnegative end lengths")
    if all(l == 0.0 for l in lengths):
        raise ValueError("all-cusp pants uses the explicit parabolic model")
    # permute so the gauge pair (L1, L2) is at positive distance: end 3 longest
    order = sorted(range(3), key=lambda i: lengths[i], reverse=True)
    perm = [order[2], order[1], order[0]]  # internal end 1, 2, 3 <- user ends
    l1, l2, l3 = lengths[perm[0]], lengths[perm[1]], lengths[perm[2]]
    d12, d13, d23 = 0.5 * l3, 0.5 * l2, 0.5 * l1

    L1 = Geodesic(0.5 * math.pi, 1.5 * math.pi)  # unit half-circle in the chart
    R = math.exp(d12)
    L2 = Geodesic(angle_of_uhp_foot(-R), angle_of_uhp_foot(R))

    # L3 is the half-circle (center m, radius rho) with inversive distance
    # cosh(d13) to L1 and cosh(d23) to L2; the two relations
    #   m^2 = 1 + rho^2 + 2 rho cosh(d13)   (disjoint from L1, outside it)
    #   m^2 = R^2 + rho^2 - 2 R rho cosh(d23)   (inside L2)
    # are linear in rho once subtracted.  Cusps (d = 0, cosh = 1) come out
    # as boundary tangency u3 = 1 or v3 = R of the same formula.
    c13, c23 = math.cosh(d13), math.cosh(d23)
    rho = (R * R - 1.0) / (2.0 * (c13 + R * c23))
    m = math.sqrt(1.0 + rho * rho + 2.0 * rho * c13)
    u3, v3 = m - rho, m + rho
    L3 = Geodesic(angle_of_uhp_foot(u3), angle_of_uhp_foot(v3))
    for g, target in ((L2, d12), (L3, d13)):
        got = geodesic_distance(L1, g)
        if abs(got - target) > 1e-7:
            raise AssertionError(f"pants solve failed: d = {got}, wanted {target}")
    if abs(geodesic_distance(L2, L3) - d23) > 1e-7:
        raise AssertionError("pants solve failed on the L2-L3 distance")

    r1 = Isometry.reflection(L1)
    r2 = Isometry.reflection(L2)
    r3 = Isometry.reflection(L3)
    gens = {"x": r2 * r1, "y": r3 * r1}

    internal_end_words = {1: "xY", 2: "y", 3: "x"}  # end k has length lengths[perm[k-1]]

    # polygon: the right-angled region between L1, L2, L3 doubled across L1
    def refl_vertex(v):
        if isinstance(v, tuple) and v[0] == "ideal":
            return ("ideal", r1.apply_angle(v[1]))
        return r1.apply(v)

    perp12 = common_perpendicular(L1, L2)
    a1 = geodesic_intersection_point(perp12, L2)
    if d23 > 0.0:
        perp23 = common_perpendicular(L2, L3)
        a2 = geodesic_intersection_point(perp23, L2)
        a3 = geodesic_intersection_point(perp23, L3)
    else:
        shared = next(
            t2 for t2 in L3.endpoints() for t1 in L2.endpoints() if angle_gap(t1, t2) < 1e-9
        )
        a2 = a3 = ("ideal", shared)
    if d13 > 0.0:
        perp31 = common_perpendicular(L3, L1)
        a4 = geodesic_intersection_point(perp31, L3)
        a5 = refl_vertex(a4)
    else:
        shared = next(
            t2 for t2 in L3.endpoints() for t1 in L1.endpoints() if angle_gap(t1, t2) < 1e-9
        )
        a4 = a5 = ("ideal", shared)

    r1L2 = r1.apply_geodesic(L2)
    r1L3 = r1.apply_geodesic(L3)
    vertices: list = [a1]
    sides: list = [PolygonSide(L2, "X", "L2")]
    if d23 > 0.0:
        vertices.append(a2)
        sides.append(PolygonSide(perp23, None, "end1-arc"))
    vertices.append(a3)
    sides.append(PolygonSide(L3, "Y", "L3"))
    if d13 > 0.0:
        vertices.append(a4)
        sides.append(PolygonSide(perp31, None, "end2-arc"))
    vertices.append(a5)
    sides.append(PolygonSide(r1L3, "y", "r1L3"))
    if d23 > 0.0:
        vertices.append(refl_vertex(a3))
        sides.append(PolygonSide(r1.apply_geodesic(perp23), None, "end1-arc-mirror"))
    vertices.append(refl_vertex(a2))
    sides.append(PolygonSide(r1L2, "x", "r1L2"))
    vertices.append(refl_vertex(a1))
    sides.append(PolygonSide(perp12, None, "end3-arc"))
    poly = FundamentalPolygon(vertices, sides)

    # assign end words back to the caller's order
    user_words = [None, None, None]
    for internal_k in (1, 2, 3):
        user_idx = perm[internal_k - 1]
        user_words[user_idx] = internal_end_words[internal_k]
    boundary_words = [w for w, l in zip(user_words, lengths) if l > 0.0]
    cusp_words = [w for w, l in zip(user_words, lengths) if l == 0.0]
    b = len(boundary_words)
    c = len(cusp_words)
    surf = FiniteTypeSurface(
        Signature(0, b, c),
        "xy",
        gens,
        poly,
        cusp_words=cusp_words,
        boundary_words=boundary_words,
        fn_params={"lengths": [l for l in lengths if l > 0.0], "twists": []},
        name=f"pants b={b} c={c}",
    )
    for w, l in zip(user_words, lengths):
        if l > 0.0:
            got = surf.element(w).translation_length()
            if abs(got - l) > 1e-8:
                raise AssertionError(f"end {w} has length {got}, wanted {l}")
    return surf


def surface_from_signature(sig: Signature, fn_lengths=None, fn_twists=None) -> FiniteTypeSurface:
    """Catalog dispatch.  fn_lengths covers interior pants curves first, then
    boundary circles; fn_twists covers interior curves.  Defaults: length 2.0,
    twist 0."""
    lengths = list(fn_lengths) if fn_lengths else []
    twists = list(fn_twists) if fn_twists else []

    def take(seq, i, default):
        return seq[i] if i < len(seq) else default

    g, b, c = sig.genus, sig.boundary, sig.cusps
    if (g, b, c) == (1, 0, 1):
        return once_punctured_torus(take(lengths, 0, 2.0), take(twists, 0, 0.0))
    if (g, b, c) == (0, 0, 3):
        return thrice_punctured_sphere()
    if (g, b, c) == (0, 0, 4):
        return four_punctured_sphere()
    if (g, b, c) == (2, 0, 0):
        return genus_two_closed()
    if (g, b, c) == (1, 1, 0):
        return one_holed_torus(take(lengths, 0, 2.0), take(twists, 0, 0.0),
                               boundary_length=take(lengths, 1, 2.0))
    if g == 0 and b + c == 3 and b >= 1:
        ends = [take(lengths, i, 2.0) for i in range(b)] + [0.0] * c
        return pants_surface(tuple(ends))
    raise UnsupportedSignatureError(
        f"signature {sig} is standard but not in the constructible catalog "
        "(supported: (1,0,1), (0,0,3), (0,0,4), (2,0,0), (1,1,0), planar b+c=3)"
    )


# ---------------------------------------------------------------------------
# surface spec files

_SPEC_INT_KEYS = ("genus", "boundary", "cusps")
_SPEC_LIST_KEYS = ("fn_lengths", "fn_twists")


def parse_surface_spec(text: str):
    """Parse the key = value surface description.

    Known keys: genus, boundary, cusps (nonnegative integers), fn_lengths,
    fn_twists (comma-separated floats), and twist_<Name> = <curve word>
    entries binding twist names for the mapping-class grammar.  Anything else
    is rejected.  Returns (Signature, fn_lengths, fn_twists, aliases).
    """
    ints = {}
    lists = {"fn_lengths": [], "fn_twists": []}
    aliases = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecFileError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _SPEC_INT_KEYS:
            try:
                ints[key] = int(value)
            except ValueError:
                raise SpecFileError(f"line {lineno}: {key} must be an integer") from None
        elif key in _SPEC_LIST_KEYS:
            try:
                lists[key] = [float(v) for v in value.split(",") if v.strip() != ""]
            except ValueError:
                raise SpecFileError(f"line {lineno}: {key} must be comma-separated numbers") from None
        elif key.startswith("twist_") and len(key) > 6:
            name = key[6:]
            if not name.isidentifier():
                raise SpecFileError(f"line {lineno}: bad twist alias name {name!r}")
            if not value.isalpha():
                raise SpecFileError(f"line {lineno}: twist alias value must be a word")
            aliases[name] = value
        else:
            raise SpecFileError(f"line {lineno}: unknown key {key!r}")
    try:
        sig = Signature(ints.get("genus", 0), ints.get("boundary", 0), ints.get("cusps", 0))
    except ValueError as exc:
        raise SpecFileError(str(exc)) from None
    return sig, lists["fn_lengths"], lists["fn_twists"], aliases
