"""Conjugacy classes of closed geodesics: enumeration, intersection numbers,
and crossings with arcs.

Intersection numbers are computed in the universal cover.  Fix the shorter
curve alpha and frame its axis A as the vertical in the half-plane chart.
Every intersection point of alpha with beta on the surface lifts to exactly
one <alpha>-orbit of translate axes h * axis(beta) crossing A, so counting
crossings with parameter inside one fundamental period [-L/2, L/2) gives
the geometric intersection number.

Candidate conjugators h are enumerated as h = q * p_j^-1 where p_j runs over
prefixes of beta's cyclic word and q over the deck ball of radius

    r0 = d(0, A) + length(alpha)/2 + margin:

the basepoint orbit of beta's own word fellow-travels its axis, so every
translate crossing the window has a representative of this shape.  The
margin is a fellow-traveler constant; tests validate it by doubling.

Duplicate candidates (one coset reached through several (q, j)) are merged
exactly, in the group: q1 p_j1^-1 and q2 p_j2^-1 name the same translate iff
q2^-1 q1 equals p_j2^-1 beta^m p_j1, which for a cyclically reduced word is
a literal slice of the cyclic word — so duplicates force |j1 - j2| (or its
wraparound complement) to be at most |q2^-1 q1|, and dedup costs O(1) per
neighbouring pair.  No floating-point tolerance is involved: two distinct
translates of a long curve can run e^(-length)-close, far below any usable
angle threshold.

Long words (10^5 letters after iterated twisting) are handled with scaled
matrix products throughout; nothing here builds a plain product of a word
longer than one letter.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .hyperbolic import (
    Geodesic,
    disk_distance,
    frame,
    point_to_geodesic_distance,
    scaled_axis,
    scaled_is_hyperbolic,
    scaled_mul,
    scaled_translation_length,
    uhp_point,
)
from .words import free_reduce, inverse_word

FT_MARGIN = 3.0
WINDOW_OFFSET = 0.0123456789  # shifts the period window off exact lattice hits
FOOT_CAP = 1e8  # feet beyond this are copies of the framed axis itself
DEHN_DEDUP_CAP = 600  # one-relator words longer than this use the slice test


class CurveClass:
    """An unoriented free-homotopy class of essential closed curves.

    Named by the lexicographically least cyclic normal form among the two
    orientations; carries its geodesic representative (axis of the holonomy)
    and lazy simplicity status.
    """

    __slots__ = ("surface", "word", "_scaled", "_att", "_rep", "_length",
                 "_simple", "_rotation_mats")

    def __init__(self, surface, key_word: str):
        self.surface = surface
        self.word = key_word
        self._scaled = surface.scaled_element(key_word)
        if not scaled_is_hyperbolic(self._scaled, 1e-9):
            raise ValueError(f"{key_word!r} does not carry a closed geodesic "
                             "(trivial, parabolic or elliptic holonomy)")
        self._att, self._rep = scaled_axis(self._scaled)
        self._length = scaled_translation_length(self._scaled)
        self._simple = None
        self._rotation_mats = None

    @classmethod
    def from_word(cls, surface, word: str) -> "CurveClass":
        key = surface.words.curve_key(word)
        if key == "":
            raise ValueError(f"{word!r} is trivial in the surface group")
        cache = surface.__dict__.setdefault("_curve_objects", {})
        got = cache.get(key)
        if got is None:
            got = cls(surface, key)
            cache[key] = got
        return got

    # -- geometry

    @property
    def length(self) -> float:
        return self._length

    @property
    def attracting(self) -> float:
        return self._att

    @property
    def repelling(self) -> float:
        return self._rep

    def axis(self) -> Geodesic:
        return Geodesic(self._att, self._rep)

    def is_peripheral(self) -> bool:
        return self.surface.is_peripheral(self.word)

    def is_simple(self) -> bool:
        if self._simple is None:
            self._simple = self.self_crossing_lifts() == 0
        return self._simple

    def self_crossing_lifts(self) -> int:
        """Distinct translates of the axis crossing it within one period
        (each surface self-intersection contributes two)."""
        return len(_axis_crossings_of_pair(self, self))

    def rotation_matrix_arrays(self):
        """Row-normalized matrices of every cyclic rotation of the word.

        Entry j is the matrix of word[j:] + word[:j] = P_j^-1 M P_j, whose
        axis is the P_j^-1-translate of the curve's axis.  Computed as
        (suffix product) * (prefix product): both factors fellow-travel the
        axis, so the single multiplication loses only a bounded number of
        digits.  Conjugating M directly would cancel e^length digits and
        fail beyond 15-letter words.
        """
        if self._rotation_mats is None:
            pres = self.surface.scaled_prefixes(self.word)
            pa = np.array([p[0] for p in pres], dtype=complex)
            pb = np.array([p[1] for p in pres], dtype=complex)
            n = len(self.word)
            sufs: list = [None] * n
            cur = (1.0 + 0.0j, 0.0j, 0.0)
            for j in range(n - 1, -1, -1):
                cur = scaled_mul(self.surface.scaled_element(self.word[j]), cur)
                sufs[j] = cur
            sa = np.array([s[0] for s in sufs], dtype=complex)
            sb = np.array([s[1] for s in sufs], dtype=complex)
            ca = sa * pa + sb * np.conj(pb)
            cb = sa * pb + sb * np.conj(pa)
            norm = np.sqrt(np.abs(ca) ** 2 + np.abs(cb) ** 2)
            self._rotation_mats = (ca / norm, cb / norm)
        return self._rotation_mats

    def sort_key(self):
        return (len(self.word), self.word)

    def __eq__(self, other):
        return (isinstance(other, CurveClass) and other.surface is self.surface
                and other.word == self.word)

    def __hash__(self):
        return hash((id(self.surface), self.word))

    def __repr__(self):
        return f"<CurveClass {self.word!r} len={self._length:.4f}>"


@dataclass
class AxisCrossing:
    """One translate of a curve's axis crossing a framed geodesic."""

    param: float  # crossing position along the framed geodesic
    sign: int  # +1 if the attracting foot lies on the positive side
    att_angle: float  # framed boundary angles of the translate
    rep_angle: float
    ball_word: str  # q; the conjugator is q * prefix^-1
    prefix_index: int


def _same_coset_free(w: str, q1: str, j1: int, q2: str, j2: int) -> bool:
    """Whether q1 p_j1^-1 and q2 p_j2^-1 name the same <w>-coset (free case).

    Equivalent to q2^-1 q1 = p_j2^-1 w^m p_j1.  For a cyclically reduced w
    the right side reduces literally: to a slice of w when m = 0, and to
    w[j2:] + w^(m-1) + w[:j1] (or its inverse) otherwise, so the test costs
    O(|q2^-1 q1|) regardless of |w| and of the power m.
    """
    v = free_reduce(inverse_word(q2) + q1)
    n = len(w)
    lv = len(v)
    # m = 0: v = p_j2^-1 p_j1
    if j1 >= j2:
        if lv == j1 - j2 and v == w[j2:j1]:
            return True
    else:
        if lv == j2 - j1 and v == inverse_word(w[j1:j2]):
            return True
    # m >= 1: v = w[j2:] + w^(m-1) + w[:j1]
    rem = lv - (n - j2) - j1
    if rem >= 0 and rem % n == 0:
        if v == w[j2:] + w * (rem // n) + w[:j1]:
            return True
    # m <= -1: v = (w[j1:] + w^(|m|-1) + w[:j2])^-1
    rem = lv - (n - j1) - j2
    if rem >= 0 and rem % n == 0:
        if v == inverse_word(w[j1:] + w * (rem // n) + w[:j2]):
            return True
    return False


def _dedup_crossings(surface, beta: CurveClass,
                     hits: list[AxisCrossing]) -> list[AxisCrossing]:
    """Keep one hit per translate of beta's axis, by exact group algebra."""
    w = beta.word
    n = len(w)
    calc = surface.words
    use_dehn = surface.relator is not None and n <= DEHN_DEDUP_CAP

    def conjugator(h: AxisCrossing) -> str:
        return free_reduce(h.ball_word + inverse_word(w[:h.prefix_index]))

    if use_dehn:
        reps: list[AxisCrossing] = []
        rep_conj: list[str] = []
        for h in hits:
            hw = conjugator(h)
            dup = False
            for rw in rep_conj:
                v = calc.reduce(inverse_word(rw) + hw)
                k = len(v) // n + 1
                if v == "" or any(
                    calc.equal(v, w * m) or calc.equal(v, inverse_word(w * m))
                    for m in range(1, k + 1)
                ):
                    dup = True
                    break
            if not dup:
                reps.append(h)
                rep_conj.append(hw)
        return reps

    # Free (or very long) case: duplicates force the rotation indices to be
    # within |q2^-1 q1| of each other, possibly wrapping around, so only
    # index-neighbours need comparing.
    span = 4 + 2 * max((len(h.ball_word) for h in hits), default=0)
    order = sorted(range(len(hits)), key=lambda i: hits[i].prefix_index)
    reps = []
    keys: list[int] = []  # ascending prefix indices of accepted hits
    acc: list[AxisCrossing] = []
    for i in order:
        h = hits[i]
        j = h.prefix_index
        cands = list(range(bisect.bisect_left(keys, j - span), len(keys)))
        if j >= n - span:  # wraparound partners sit at the small indices
            cands.extend(range(bisect.bisect_right(keys, j - n + span)))
        dup = any(
            _same_coset_free(w, h.ball_word, j,
                             acc[k].ball_word, acc[k].prefix_index)
            for k in set(cands)
        )
        if not dup:
            keys.append(j)
            acc.append(h)
            reps.append(h)
    return reps


def _framed_axis_crossings(
    surface,
    fr,
    window: tuple[float, float],
    beta: CurveClass,
    r0: float,
) -> list[AxisCrossing]:
    """Translates of beta's axis crossing the framed vertical inside
    the parameter window.  `fr` maps the reference geodesic so that its
    second endpoint goes to angle 0; parameters increase toward it."""
    ball_words, ba, bb, _ = surface.deck_ball(r0)
    # precompose the frame with every ball element
    fa, fb = fr.alpha, fr.beta
    A = fa * ba + fb * np.conj(bb)
    B = fa * bb + fb * np.conj(ba)
    # Endpoints of the translate p_j^-1 * axis(beta): the axis of the j-th
    # cyclic rotation of beta's word (= the prefix conjugate, exactly).
    ca, cb = beta.rotation_matrix_arrays()
    im = ca.imag
    disc = np.abs(cb) ** 2 - im * im
    if disc.size and disc.min() <= 0.0:
        raise AssertionError("conjugate of a hyperbolic element lost "
                             "hyperbolicity; prefix transport is underscaled")
    sq = np.sqrt(disc)
    cc = np.conj(cb)
    z1 = (1j * im + sq) / cc
    z2 = (1j * im - sq) / cc
    # the attracting fixed point is the one where |derivative| < 1
    swap = np.abs(cc * z1 + np.conj(ca)) < np.abs(cc * z2 + np.conj(ca))
    u_att = np.where(swap, z2, z1)
    u_rep = np.where(swap, z1, z2)
    u_att = u_att / np.abs(u_att)
    u_rep = u_rep / np.abs(u_rep)

    lo, hi = window
    hits: list[AxisCrossing] = []

    def scan(w1, w2, q_index=None, j_index=None):
        with np.errstate(divide="ignore", invalid="ignore"):
            p = -w1.imag / (1.0 - w1.real)
            q = -w2.imag / (1.0 - w2.real)
            prod = p * q
            t = 0.5 * np.log(np.abs(prod))
        ok = (np.abs(p) < FOOT_CAP) & (np.abs(q) < FOOT_CAP) & (prod < 0.0)
        ok &= (t >= lo) & (t < hi)
        for idx in np.nonzero(ok)[0]:
            qi = q_index if q_index is not None else int(idx)
            j = j_index if j_index is not None else int(idx)
            hits.append(AxisCrossing(
                float(t[idx]), 1 if p[idx] > 0 else -1,
                float(np.mod(np.angle(w1[idx]), 2.0 * np.pi)),
                float(np.mod(np.angle(w2[idx]), 2.0 * np.pi)),
                ball_words[qi], j,
            ))

    n, m = len(ca), len(ba)
    if n <= m:
        for j in range(n):
            w1 = (A * u_att[j] + B) / (np.conj(B) * u_att[j] + np.conj(A))
            w2 = (A * u_rep[j] + B) / (np.conj(B) * u_rep[j] + np.conj(A))
            scan(w1, w2, j_index=j)
    else:
        for qi in range(m):
            w1 = (A[qi] * u_att + B[qi]) / (np.conj(B[qi]) * u_att + np.conj(A[qi]))
            w2 = (A[qi] * u_rep + B[qi]) / (np.conj(B[qi]) * u_rep + np.conj(A[qi]))
            scan(w1, w2, q_index=qi)
    hits.sort(key=lambda h: (h.param, h.prefix_index, h.ball_word))
    return _dedup_crossings(surface, beta, hits)


def _axis_crossings_of_pair(alpha: CurveClass, beta: CurveClass,
                            extra_margin: float = 0.0) -> list[AxisCrossing]:
    surface = alpha.surface
    fr = frame(alpha._rep, alpha._att)
    ell = alpha.length
    lo = -0.5 * ell + WINDOW_OFFSET
    r0 = (point_to_geodesic_distance(0.0 + 0.0j, alpha.axis())
          + 0.5 * ell + FT_MARGIN + extra_margin)
    return _framed_axis_crossings(surface, fr, (lo, lo + ell), beta, r0)


@dataclass
class AxisTranslate:
    """One translate of a curve's axis passing near the origin."""

    att_angle: float
    rep_angle: float
    dist: float  # distance from the origin to the translate
    ball_word: str
    prefix_index: int


def axis_translates_near_origin(curve: CurveClass, radius: float,
                                extra_margin: float = 0.0) -> list[AxisTranslate]:
    """Deduplicated translates h * axis(curve) within `radius` of the origin.

    Same coset enumeration as the crossing engine, h = q * p_j^-1, but the
    conjugator ball radius is just `radius + margin`: the prefix orbit points
    p_j * 0 march along the axis one letter apart, so whenever a translate
    enters the window some representative q moves the origin only a letter
    step plus a fellow-traveler constant further.  In particular the ball
    does not grow with the curve length.
    """
    surface = curve.surface
    r0 = radius + FT_MARGIN + extra_margin
    ball_words, ba, bb, _ = surface.deck_ball(r0)
    ca, cb = curve.rotation_matrix_arrays()
    im = ca.imag
    disc = np.abs(cb) ** 2 - im * im
    if disc.size and disc.min() <= 0.0:
        raise AssertionError("conjugate of a hyperbolic element lost "
                             "hyperbolicity; prefix transport is underscaled")
    sq = np.sqrt(disc)
    cc = np.conj(cb)
    z1 = (1j * im + sq) / cc
    z2 = (1j * im - sq) / cc
    swap = np.abs(cc * z1 + np.conj(ca)) < np.abs(cc * z2 + np.conj(ca))
    u_att = np.where(swap, z2, z1)
    u_rep = np.where(swap, z1, z2)
    u_att = u_att / np.abs(u_att)
    u_rep = u_rep / np.abs(u_rep)

    # d(0, geodesic with endpoint gap g) satisfies cosh d = 1 / sin(g/2)
    min_gap = 2.0 * math.asin(min(1.0, 1.0 / math.cosh(radius)))
    two_pi = 2.0 * math.pi
    hits: list[AxisTranslate] = []

    def scan(w1, w2, q_index=None, j_index=None):
        t1 = np.angle(w1)
        t2 = np.angle(w2)
        gap = np.abs(np.mod(t1 - t2 + np.pi, two_pi) - np.pi)
        ok = gap >= min_gap
        for idx in np.nonzero(ok)[0]:
            qi = q_index if q_index is not None else int(idx)
            j = j_index if j_index is not None else int(idx)
            d = math.acosh(1.0 / math.sin(0.5 * float(gap[idx])))
            hits.append(AxisTranslate(
                float(np.mod(t1[idx], two_pi)), float(np.mod(t2[idx], two_pi)),
                d, ball_words[qi], j))

    n, m = len(ca), len(ba)
    if n <= m:
        for j in range(n):
            w1 = (ba * u_att[j] + bb) / (np.conj(bb) * u_att[j] + np.conj(ba))
            w2 = (ba * u_rep[j] + bb) / (np.conj(bb) * u_rep[j] + np.conj(ba))
            scan(w1, w2, j_index=j)
    else:
        for qi in range(m):
            w1 = (ba[qi] * u_att + bb[qi]) / (np.conj(bb[qi]) * u_att + np.conj(ba[qi]))
            w2 = (ba[qi] * u_rep + bb[qi]) / (np.conj(bb[qi]) * u_rep + np.conj(ba[qi]))
            scan(w1, w2, q_index=qi)
    hits.sort(key=lambda h: (h.att_angle, h.rep_angle, h.prefix_index, h.ball_word))
    return _dedup_crossings(surface, curve, hits)


def geometric_intersection(c1: CurveClass, c2: CurveClass,
                           extra_margin: float = 0.0) -> int:
    """The geometric intersection number of two curve classes."""
    if c1.surface is not c2.surface:
        raise ValueError("curves live on different surfaces")
    if c1.word == c2.word:
        return 0
    cache = c1.surface.__dict__.setdefault("_intersection_cache", {})
    key = (c1.word, c2.word) if c1.sort_key() <= c2.sort_key() else (c2.word, c1.word)
    if extra_margin == 0.0 and key in cache:
        return cache[key]
    alpha, beta = (c1, c2) if c1.sort_key() <= c2.sort_key() else (c2, c1)
    n = len(_axis_crossings_of_pair(alpha, beta, extra_margin))
    if extra_margin == 0.0:
        cache[key] = n
    return n


# ---------------------------------------------------------------------------
# enumeration of simple closed geodesics


def _cyclic_candidates(letters: str, n: int):
    """Nonbacktracking cyclic words of length n over the doubled alphabet."""
    alphabet = sorted(letters + letters.upper())
    for tup in itertools.product(alphabet, repeat=n):
        if n > 1:
            if any(tup[i] == inverse_word(tup[i - 1]) for i in range(1, n)):
                continue
            if tup[0] == inverse_word(tup[-1]):
                continue
        yield "".join(tup)


def _literally_periodic(word: str) -> bool:
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and all(word[i] == word[i % d] for i in range(n)):
            return True
    return False


def enumerate_simple_closed_geodesics(surface, max_word_length: int) -> list[CurveClass]:
    """All distinct simple, essential, primitive closed-geodesic classes
    whose normal form uses at most max_word_length letters, sorted by
    (length of word, word)."""
    cache = surface.__dict__.setdefault("_enum_cache", {})
    if max_word_length in cache:
        return list(cache[max_word_length])
    calc = surface.words
    seen: set[str] = set()
    shorter_keys: list[str] = []
    out: list[CurveClass] = []
    for n in range(1, max_word_length + 1):
        for w in _cyclic_candidates(surface.letters, n):
            key = calc.curve_key(w)
            if key == "" or key in seen:
                continue
            seen.add(key)
            if len(key) != n:
                continue  # normal form belongs to another length bucket
            if _literally_periodic(key):
                shorter_keys.append(key)
                continue
            if surface.relator is not None and any(
                len(key) % len(v) == 0 and len(v) < len(key)
                and calc.curve_key(v * (len(key) // len(v))) == key
                for v in shorter_keys
            ):
                continue
            shorter_keys.append(key)
            try:
                c = CurveClass.from_word(surface, key)
            except ValueError:
                continue  # no geodesic representative (cusp class etc.)
            if surface.is_peripheral(key):
                continue
            if not c.is_simple():
                continue
            out.append(c)
    out.sort(key=CurveClass.sort_key)
    cache[max_word_length] = out
    return list(out)


def torus_slope_word(p: int, q: int) -> str:
    """Word of the simple closed curve of slope (p, q) on the torus.

    The cutting sequence of the line of slope q/p through the square
    fundamental domain (a Christoffel word in the two generators, with
    inverse letters when a component is negative) spells a simple closed
    curve with exponent sums exactly (p, q).  Crossing numbers then obey
    i((p, q), (r, s)) = |p s - q r|, which the geodesic intersection
    routine reproduces.
    """
    if p == 0 and q == 0:
        raise ValueError("slope (0, 0) names no curve")
    if math.gcd(p, q) != 1:
        raise ValueError(f"slope ({p}, {q}) is not primitive")
    la = "a" if p >= 0 else "A"
    lb = "b" if q >= 0 else "B"
    p, q = abs(p), abs(q)
    n = p + q
    out = []
    for k in range(1, n + 1):
        out.append(lb if (k * q) // n != ((k - 1) * q) // n else la)
    return "".join(out)


# ---------------------------------------------------------------------------
# crossings of a geodesic segment with the translates of a curve


@dataclass
class SegmentCrossing:
    param: float  # position along the segment, increasing from the start
    sign: int  # orientation of the crossing
    conjugator: str  # h: the crossed translate is h * axis(curve)


def segment_crossings(surface, curve: CurveClass, z0: complex,
                      end_word: str) -> list[SegmentCrossing]:
    """Ordered crossings of the segment [z0, w(z0)] with the lifts of a curve.

    Used to assemble twisted loops: each crossing contributes a conjugate
    h * curve^(+-1) * h^-1 inserted in segment order."""
    from .surfaces import geodesic_through

    g = surface.element(end_word)
    z1 = g.apply(z0)
    seg = geodesic_through(z0, z1)
    fr = frame(seg.theta1, seg.theta2)

    def seg_param(z, f):
        return math.log(abs(uhp_point(f.apply(z))))

    t0, t1 = seg_param(z0, fr), seg_param(z1, fr)
    if t0 > t1:
        fr = frame(seg.theta2, seg.theta1)
        t0, t1 = seg_param(z0, fr), seg_param(z1, fr)
    r0 = max(disk_distance(0.0j, z0), disk_distance(0.0j, z1)) + FT_MARGIN
    raw = _framed_axis_crossings(surface, fr, (t0, t1), curve, r0)
    out = []
    for h in raw:
        if min(abs(h.param - t0), abs(h.param - t1)) < 1e-7:
            raise ValueError("segment endpoint lies on a lift of the twisting "
                             "curve; perturb the basepoint")
        conj = free_reduce(h.ball_word + inverse_word(curve.word[:h.prefix_index]))
        out.append(SegmentCrossing(h.param, h.sign, conj))
    out.sort(key=lambda s: s.param)
    return out
