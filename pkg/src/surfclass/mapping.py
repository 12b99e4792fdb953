"""Mapping classes as marked automorphisms of the surface group.

A mapping class is stored by its images on the generators together with a
verified inverse.  Construction checks that the peripheral structure is
preserved (every cusp and boundary class maps to a cusp or boundary class
with the same traversal orientation) and, for closed surfaces, that the
relator maps to the identity class.

Dehn twists are assembled geometrically: for each generator loop, the
segment from the basepoint to its translate is cut at the lifts of the
twisting geodesic it crosses, and one conjugate of the curve word is
inserted per crossing in segment order,

    T(g) = h_1 c^(e_1) h_1^-1 * ... * h_k c^(e_k) h_k^-1 * g,

with the sign of each insertion read off from the crossing direction.  The
global handedness constant is chosen so the twist about the first core
curve of the punctured torus acts on homology as [[1, 1], [0, 1]].

Triviality of a mapping class (being an inner automorphism) is decided
exactly: an automorphism is conjugation by x iff one isometry X conjugates
every generator matrix onto its image matrix.  That is a real-linear system
for the two entries of X; its nullspace gives a candidate, and a candidate
is accepted only if it matches a deck element whose word then passes an
exact word-calculus check on every generator.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .curves import CurveClass, segment_crossings
from .hyperbolic import Isometry
from .words import apply_morphism, extend_images, exponent_sums, free_reduce, inverse_word

TWIST_SIGN = -1  # handedness; calibrated on the punctured-torus homology action
TWIST_BASEPOINT = 0.051 + 0.131j  # generic: off every short geodesic lift
ORDER_LENGTH_CAP = 4096  # image length beyond which a power cannot be inner
CONJUGATOR_BALL_CAP = 12.0


class NotMappingClassError(ValueError):
    """The given generator images do not define a mapping class."""


class MappingClass:
    """A marked automorphism of the surface group with a verified inverse."""

    def __init__(self, surface, images: dict[str, str],
                 inv_images: dict[str, str], word_record: str = "",
                 _skip_checks: bool = False):
        self.surface = surface
        self.images = {g: free_reduce(images[g]) for g in surface.letters}
        self.inv_images = {g: free_reduce(inv_images[g]) for g in surface.letters}
        self.word_record = word_record
        self._full = extend_images(self.images)
        self._inv_full = extend_images(self.inv_images)
        self._homology = None
        if not _skip_checks:
            self._certify_inverse()
            self._check_peripheral()

    # -- construction-time verification

    def _certify_inverse(self):
        """Make images/inv_images exact two-sided inverses.

        If f(finv(g)) = x g x^-1 for a fixed x (the two maps are inverse only
        as outer automorphisms), absorb x into the inverse images.
        """
        calc = self.surface.words
        comp = {g: apply_morphism(self.inv_images[g], self._full)
                for g in self.surface.letters}
        if all(calc.equal(comp[g], g) for g in self.surface.letters):
            return
        x = _inner_conjugator(self.surface, comp)
        if x is None:
            raise NotMappingClassError(
                "inverse images do not invert the map, even up to conjugation")
        xi = inverse_word(x)
        self.inv_images = {
            g: free_reduce(apply_morphism(xi + g + x, self._inv_full))
            for g in self.surface.letters
        }
        self._inv_full = extend_images(self.inv_images)
        comp = {g: apply_morphism(self.inv_images[g], self._full)
                for g in self.surface.letters}
        if not all(calc.equal(comp[g], g) for g in self.surface.letters):
            raise NotMappingClassError("could not correct the inverse images")

    def _check_peripheral(self):
        calc = self.surface.words
        if self.surface.relator is not None:
            if not calc.is_trivial(self.apply(self.surface.relator)):
                raise NotMappingClassError("relator is not preserved")
        peripheral = list(self.surface.cusp_words) + list(self.surface.boundary_words)
        targets = {calc.normal_form(p) for p in peripheral}
        for p in peripheral:
            key = calc.normal_form(self.apply(p))
            if key not in targets:
                raise NotMappingClassError(
                    f"peripheral class {p!r} maps outside the peripheral "
                    f"structure (image key {key!r})")

    # -- action

    def apply(self, word: str) -> str:
        """Freely reduced image of a word."""
        return apply_morphism(word, self._full)

    def apply_inverse(self, word: str) -> str:
        return apply_morphism(word, self._inv_full)

    def push_forward(self, curve) -> CurveClass:
        word = curve.word if isinstance(curve, CurveClass) else curve
        return CurveClass.from_word(self.surface, self.apply(word))

    def homology_matrix(self) -> np.ndarray:
        """Integer action on first homology, columns indexed by generators."""
        if self._homology is None:
            letters = self.surface.letters
            cols = [exponent_sums(self.images[g], letters) for g in letters]
            self._homology = np.array(cols, dtype=int).T
        return self._homology

    # -- group structure

    def then(self, other: "MappingClass") -> "MappingClass":
        """The composite map: self first, then other."""
        if other.surface is not self.surface:
            raise ValueError("mapping classes live on different surfaces")
        images = {g: apply_morphism(self.images[g], other._full)
                  for g in self.surface.letters}
        inv = {g: apply_morphism(other.inv_images[g], self._inv_full)
               for g in self.surface.letters}
        rec = "*".join(r for r in (self.word_record, other.word_record) if r)
        return MappingClass(self.surface, images, inv, rec, _skip_checks=True)

    def inverse(self) -> "MappingClass":
        rec = invert_twist_word(self.word_record) if self.word_record else ""
        return MappingClass(self.surface, self.inv_images, self.images,
                            rec, _skip_checks=True)

    def power(self, n: int) -> "MappingClass":
        out = identity_class(self.surface)
        step = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out.then(step)
        return out

    def conjugated_by(self, word: str) -> "MappingClass":
        """conj_word o self o conj_word^-1 as a marked map (same outer class)."""
        wi = inverse_word(word)
        images = {g: free_reduce(word + self.apply(free_reduce(wi + g + word)) + wi)
                  for g in self.surface.letters}
        inv = {g: free_reduce(word + self.apply_inverse(free_reduce(wi + g + word)) + wi)
               for g in self.surface.letters}
        return MappingClass(self.surface, images, inv, self.word_record,
                            _skip_checks=True)

    def _post_conjugated(self, c: str) -> "MappingClass":
        """conj_c o self: the same outer class with rebased images."""
        ci = inverse_word(c)
        images = {g: free_reduce(c + self.images[g] + ci)
                  for g in self.surface.letters}
        inv = {g: self.apply_inverse(ci + g + c)
               for g in self.surface.letters}
        return MappingClass(self.surface, images, inv, self.word_record,
                            _skip_checks=True)

    def tightened(self) -> tuple["MappingClass", str]:
        """Greedily peel conjugators off the images.

        Returns (conj_y o self, y); the result has the shortest images the
        greedy single-letter search finds.
        """
        cur, y = self, ""
        total = sum(len(w) for w in cur.images.values())
        improved = True
        while improved:
            improved = False
            for c in cur.surface.letters + cur.surface.letters.upper():
                cand = cur._post_conjugated(c)
                t = sum(len(w) for w in cand.images.values())
                if t < total:
                    cur, total, improved = cand, t, True
                    y = free_reduce(c + y)
                    break
        return cur, y

    # -- triviality and order

    def is_inner(self) -> tuple[bool, str | None]:
        """Whether the map is conjugation by a group element (the trivial
        mapping class), and if so by which word."""
        tight, y = self.tightened()
        x = _inner_conjugator(self.surface, tight.images)
        if x is None:
            return False, None
        # conj_y o self = conj_x, so self = conj_{y^-1 x}
        return True, free_reduce(inverse_word(y) + x)

    def is_identity_class(self) -> bool:
        return self.is_inner()[0]

    def order(self, max_n: int = 24) -> int | None:
        """Smallest n >= 1 with the n-th power trivial, or None."""
        eye = np.eye(len(self.surface.letters), dtype=int)
        h = self.homology_matrix()
        g = self
        hk = h
        for n in range(1, max_n + 1):
            if n > 1:
                g = g.then(self)
                hk = hk @ h
            if any(len(w) > ORDER_LENGTH_CAP for w in g.images.values()):
                return None
            if not np.array_equal(hk, eye):
                continue
            if g.is_identity_class():
                return n
        return None

    # -- peripheral bookkeeping

    def boundary_action(self) -> list[tuple[str, str]]:
        """How the peripheral classes permute: pairs (class, image class)."""
        calc = self.surface.words
        peripheral = list(self.surface.cusp_words) + list(self.surface.boundary_words)
        by_key = {calc.normal_form(p): p for p in peripheral}
        out = []
        for p in peripheral:
            key = calc.normal_form(self.apply(p))
            out.append((p, by_key[key]))
        return out

    def __repr__(self):
        rec = f" {self.word_record!r}" if self.word_record else ""
        ims = ", ".join(f"{g}->{w}" for g, w in self.images.items())
        return f"<MappingClass{rec} {ims}>"


def identity_class(surface) -> MappingClass:
    letters = surface.letters
    ident = {g: g for g in letters}
    return MappingClass(surface, ident, dict(ident), "", _skip_checks=True)


# ---------------------------------------------------------------------------
# inner-automorphism solver


def _inner_conjugator(surface, images: dict[str, str]) -> str | None:
    """A word x with images[g] = x g x^-1 for every generator, or None.

    Callers tighten first, so a genuinely inner map arrives with short
    images; long images cannot be letter conjugates at matrix precision and
    are rejected outright (also keeping the matrix products from
    overflowing).
    """
    letters = surface.letters
    if any(len(images[g]) > 600 for g in letters):
        return None
    rows = []
    mats = []
    for g in letters:
        M = surface.element(g)
        N = surface.element(images[g])
        # matrices realize the group only up to sign; align by trace
        if abs(M.trace) < 0.5:
            raise AssertionError("generator with near-zero trace; sign "
                                 "alignment by trace is unavailable")
        if abs(N.trace - M.trace) > abs(N.trace + M.trace):
            N = Isometry(-N.alpha, -N.beta)
        if abs(N.trace - M.trace) > 1e-6:
            return None  # conjugation preserves the trace
        mats.append((M, N))
    for M, N in mats:
        al, be = M.alpha, M.beta
        ga, de = N.alpha, N.beta
        a1, b1, c1 = al - ga, np.conj(be), -de
        rows.append([a1.real, -a1.imag, b1.real + c1.real, -b1.imag + c1.imag])
        rows.append([a1.imag, a1.real, b1.imag + c1.imag, b1.real - c1.real])
        a2, b2, c2 = be, np.conj(al) - ga, -de
        rows.append([a2.real + c2.real, -a2.imag + c2.imag, b2.real, -b2.imag])
        rows.append([a2.imag + c2.imag, a2.real - c2.real, b2.imag, b2.real])
    A = np.array(rows, dtype=float)
    _, s, vt = np.linalg.svd(A)
    if s[-1] > 1e-6 * max(1.0, s[0]):
        return None
    v = vt[-1]
    p = complex(v[0], v[1])
    q = complex(v[2], v[3])
    det = abs(p) ** 2 - abs(q) ** 2
    if det <= 1e-9:
        return None  # conjugator is not an orientation-preserving isometry
    scale = 1.0 / math.sqrt(det)
    p, q = p * scale, q * scale
    disp = 2.0 * math.asinh(abs(q))
    if disp > CONJUGATOR_BALL_CAP:
        return None
    words, ba, bb, _ = surface.deck_ball(disp + 0.5)
    err = np.minimum(np.abs(ba - p) + np.abs(bb - q),
                     np.abs(ba + p) + np.abs(bb + q))
    idx = int(np.argmin(err))
    if err[idx] > 1e-6:
        return None
    x = words[idx]
    calc = surface.words
    xi = inverse_word(x)
    if all(calc.equal(images[g], x + g + xi) for g in letters):
        return x
    return None


# ---------------------------------------------------------------------------
# Dehn twists


def dehn_twist(surface, curve_word: str, power: int = 1) -> MappingClass:
    """The Dehn twist about a simple closed geodesic, as a mapping class."""
    cache = surface.__dict__.setdefault("_twist_cache", {})
    curve = CurveClass.from_word(surface, curve_word)
    if curve.is_peripheral():
        raise ValueError(f"{curve_word!r} is peripheral; twisting about it "
                         "is trivial under free isotopy")
    if not curve.is_simple():
        raise ValueError(f"{curve_word!r} is not a simple closed curve")
    key = (curve.word, power)
    got = cache.get(key)
    if got is not None:
        return got
    if power == 0:
        mc = identity_class(surface)
    else:
        images = _twist_images(surface, curve, power)
        inv = _twist_images(surface, curve, -power)
        mc = MappingClass(surface, images, inv, _twist_record(curve.word, power))
    cache[key] = mc
    return mc


def _twist_images(surface, curve: CurveClass, power: int) -> dict[str, str]:
    c, ci = curve.word, inverse_word(curve.word)
    images = {}
    for g in surface.letters:
        parts = []
        for x in segment_crossings(surface, curve, TWIST_BASEPOINT, g):
            block = (c if TWIST_SIGN * x.sign * power > 0 else ci) * (
                abs(power))
            parts.append(x.conjugator + block + inverse_word(x.conjugator))
        parts.append(g)
        images[g] = free_reduce("".join(parts))
    return images


def _twist_record(curve_word: str, power: int) -> str:
    base = f"twist({curve_word})"
    return base if power == 1 else f"{base}^{power}"


# ---------------------------------------------------------------------------
# twist words ("Ta*Tb^-1") -> mapping classes

_TOKEN = re.compile(r"^([A-Za-z_]\w*)(?:\^(-?\d+))?$")


def parse_twist_word(grammar: str) -> list[tuple[str, int]]:
    """Split a twist word into (name, power) factors, in application order."""
    text = grammar.strip()
    if not text:
        return []
    factors = []
    for raw in text.split("*"):
        m = _TOKEN.match(raw.strip())
        if m is None:
            raise NotMappingClassError(
                f"bad twist-word factor {raw.strip()!r}; expected "
                "Name or Name^k separated by '*'")
        factors.append((m.group(1), int(m.group(2) or 1)))
    return factors


def invert_twist_word(grammar: str) -> str:
    try:
        factors = parse_twist_word(grammar)
    except ValueError:
        return f"({grammar})^-1" if grammar else ""
    out = []
    for name, k in reversed(factors):
        out.append(name if k == -1 else f"{name}^{-k}")
    return "*".join(out)


def build_mapping_class(surface, grammar: str,
                        aliases: dict[str, str] | None = None) -> MappingClass:
    """A mapping class from a twist word like "Ta*Tb^-1".

    Factors apply left to right.  Names resolve through the user alias table
    first, then the surface's default aliases (T<letter>, T<letter pair>, and
    Tsep where a preferred separating curve exists).
    """
    table = dict(surface.default_twist_aliases())
    if aliases:
        table.update(aliases)
    mc = identity_class(surface)
    for name, k in parse_twist_word(grammar):
        word = table.get(name)
        if word is None:
            known = ", ".join(sorted(table))
            raise NotMappingClassError(f"unknown twist name {name!r} (known: {known})")
        mc = mc.then(dehn_twist(surface, word, k))
    mc.word_record = grammar.strip()
    return mc
