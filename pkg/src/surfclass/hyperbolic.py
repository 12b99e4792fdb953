"""Poincare disk model: isometries, geodesics, and the circle at infinity.

Conventions used throughout the package:

* Points of the open disk are python complex numbers z with |z| < 1.
* Points of the circle at infinity are angles (floats, radians, normalized
  to [0, 2*pi)).
* An orientation preserving isometry is a Moebius transformation

      z  |->  (alpha*z + beta) / (conj(beta)*z + conj(alpha)),

  i.e. an SU(1,1) matrix [[alpha, beta], [conj(beta), conj(alpha)]] with
  |alpha|^2 - |beta|^2 = 1.  An orientation reversing isometry acts as
  z |-> M(conj(z)); reversing maps are only ever composed and inverted,
  never classified.
* A geodesic is an unordered pair of distinct boundary angles.

Trace classification (trace = 2*Re(alpha), well defined up to sign):
|trace| < 2 elliptic, = 2 parabolic (or the identity), > 2 hyperbolic with
translation length 2*arccosh(|trace|/2).  Comparisons use TOL_ANGLE = 1e-9.

Long words in a Fuchsian group overflow float64 (matrix entries grow like
exp(length/2)), so there is a parallel "scaled" representation: a unit-norm
matrix together with a running log of the discarded scale.  Axes and
translation lengths are projectively invariant and survive the rescaling.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TOL_ANGLE = 1e-9

TWO_PI = 2.0 * math.pi


def normalize_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:  # fmod can land exactly on 2*pi after the branch above
        t -= TWO_PI
    return t


def angle_gap(t1: float, t2: float) -> float:
    """Distance between two angles in the circle metric (<= pi)."""
    d = abs(math.fmod(t1 - t2, TWO_PI))
    if d > math.pi:
        d = TWO_PI - d
    return d


def validate_disk_point(z: complex, tol: float = 1e-12) -> complex:
    if abs(z) > 1.0 - tol:
        raise ValueError(f"point {z!r} is not inside the disk (|z| = {abs(z)})")
    return z


# ---------------------------------------------------------------------------
# isometries


class Isometry:
    """An isometry of the hyperbolic plane in the disk model.

    ``alpha``, ``beta`` are the SU(1,1) entries; ``reversing`` marks an
    orientation reversing map z |-> M(conj(z)).  Matrices are renormalized to
    det 1 after every construction, so drift does not accumulate under
    composition.
    """

    __slots__ = ("alpha", "beta", "reversing")

    def __init__(self, alpha: complex, beta: complex, reversing: bool = False):
        det = abs(alpha) ** 2 - abs(beta) ** 2
        if det <= 0.0:
            raise ValueError(f"not an SU(1,1) pair: |a|^2-|b|^2 = {det}")
        s = math.sqrt(det)
        self.alpha = complex(alpha) / s
        self.beta = complex(beta) / s
        self.reversing = bool(reversing)

    # -- constructors

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1.0, 0.0)

    @classmethod
    def rotation(cls, phi: float) -> "Isometry":
        """Rotation of the disk about 0 by angle phi."""
        return cls(cmath.exp(0.5j * phi), 0.0)

    @classmethod
    def real_translation(cls, t: float) -> "Isometry":
        """Hyperbolic translation along the real diameter, d(0, T(0)) = |t|."""
        return cls(math.cosh(0.5 * t), math.sinh(0.5 * t))

    @classmethod
    def from_uhp_matrix(cls, m) -> "Isometry":
        """Conjugate a real SL(2,R) upper-half-plane matrix to the disk.

        Uses the Cayley map z |-> (z - i)/(z + i).  The half plane never
        appears in the public API; this is a convenience for the classical
        matrix constructions of the catalog groups.
        """
        (a, b), (c, d) = m
        det = a * d - b * c
        if abs(det - 1.0) > 1e-9:
            s = math.sqrt(abs(det))
            a, b, c, d = a / s, b / s, c / s, d / s
        alpha = complex(a + d, b - c) * 0.5
        beta = complex(a - d, -(b + c)) * 0.5
        return cls(alpha, beta)

    @classmethod
    def reflection(cls, g: "Geodesic") -> "Isometry":
        """Orientation reversing reflection fixing the geodesic g pointwise."""
        f = frame(g.theta1, g.theta2)
        # conj() is the reflection in the real diameter; pull back through f.
        refl = f.inverse() * Isometry(1.0, 0.0, reversing=True) * f
        return refl

    # -- algebra

    def __mul__(self, other: "Isometry") -> "Isometry":
        """Composition: (f * g)(z) = f(g(z))."""
        a1, b1 = self.alpha, self.beta
        if self.reversing:
            a2, b2 = other.alpha.conjugate(), other.beta.conjugate()
        else:
            a2, b2 = other.alpha, other.beta
        alpha = a1 * a2 + b1 * b2.conjugate()
        beta = a1 * b2 + b1 * a2.conjugate()
        return Isometry(alpha, beta, self.reversing ^ other.reversing)

    def inverse(self) -> "Isometry":
        a, b = self.alpha.conjugate(), -self.beta
        if self.reversing:
            return Isometry(a.conjugate(), b.conjugate(), True)
        return Isometry(a, b)

    def __repr__(self):
        tag = "-" if self.reversing else "+"
        return f"Isometry({self.alpha:.6g}, {self.beta:.6g}, {tag})"

    # -- action

    def apply(self, z: complex) -> complex:
        if self.reversing:
            z = z.conjugate()
        return (self.alpha * z + self.beta) / (self.beta.conjugate() * z + self.alpha.conjugate())

    def __call__(self, z: complex) -> complex:
        return self.apply(z)

    def apply_angle(self, theta: float) -> float:
        if self.reversing:
            theta = -theta
        z = cmath.exp(1j * theta)
        w = (self.alpha * z + self.beta) / (self.beta.conjugate() * z + self.alpha.conjugate())
        return normalize_angle(cmath.phase(w))

    def apply_angles(self, thetas: np.ndarray) -> np.ndarray:
        """Vectorized boundary action."""
        t = np.asarray(thetas, dtype=float)
        if self.reversing:
            t = -t
        z = np.exp(1j * t)
        w = (self.alpha * z + self.beta) / (np.conj(self.beta) * z + np.conj(self.alpha))
        return np.mod(np.angle(w), TWO_PI)

    def apply_geodesic(self, g: "Geodesic") -> "Geodesic":
        return Geodesic(self.apply_angle(g.theta1), self.apply_angle(g.theta2))

    # -- classification

    @property
    def trace(self) -> float:
        """Real trace 2*Re(alpha) (sign is a matrix-lift artifact)."""
        return 2.0 * self.alpha.real

    def is_identity(self, tol: float = TOL_ANGLE) -> bool:
        return (
            not self.reversing
            and abs(self.beta) < tol
            and abs(self.alpha.imag) < tol
            and abs(abs(self.alpha.real) - 1.0) < tol
        )

    def classify(self, tol: float = TOL_ANGLE) -> "IsometryClassification":
        if self.reversing:
            raise ValueError("orientation-reversing isometries are composed, never classified")
        tr = abs(self.trace)
        if self.is_identity(tol):
            return IsometryClassification("identity", self.trace)
        if tr < 2.0 - tol:
            z0 = self._elliptic_fixed_point()
            c, d = self.beta.conjugate(), self.alpha.conjugate()
            rot = -2.0 * cmath.phase(c * z0 + d)
            return IsometryClassification("elliptic", self.trace,
                                          fixed_point=z0, rotation_angle=rot)
        if tr <= 2.0 + tol:
            # double root of the fixed point equation, on the circle
            if abs(self.beta) < tol:
                raise ValueError("numerically indistinguishable from the identity")
            z = 1j * self.alpha.imag / self.beta.conjugate()
            return IsometryClassification("parabolic", self.trace,
                                          fixed_angle=normalize_angle(cmath.phase(z)))
        att, rep = self._axis_angles()
        length = 2.0 * math.acosh(0.5 * tr)
        return IsometryClassification("hyperbolic", self.trace,
                                      translation_length=length,
                                      attracting=att, repelling=rep)

    def _elliptic_fixed_point(self) -> complex:
        a, b = self.alpha, self.beta
        if abs(b) < TOL_ANGLE:
            return 0.0 + 0.0j  # rotation about the origin
        im = a.imag
        disc = abs(b) ** 2 - im * im  # < 0 for elliptic
        root = (1j * im + 1j * math.sqrt(-disc)) / b.conjugate()
        if abs(root) > 1.0:
            root = (1j * im - 1j * math.sqrt(-disc)) / b.conjugate()
        return root

    def _axis_angles(self) -> tuple[float, float]:
        """(attracting, repelling) boundary angles of a hyperbolic isometry.

        Roots of conj(b) z^2 + (conj(a) - a) z - b = 0; the attracting one has
        the larger |c z + d| (a scale-free test, also valid for scaled
        matrices).
        """
        a, b = self.alpha, self.beta
        im = a.imag
        disc = abs(b) ** 2 - im * im
        if disc <= 0.0:
            raise ValueError("isometry has no axis (not hyperbolic)")
        sq = math.sqrt(disc)
        c = b.conjugate()
        z1 = (1j * im + sq) / c
        z2 = (1j * im - sq) / c
        d = self.alpha.conjugate()
        if abs(c * z1 + d) < abs(c * z2 + d):
            z1, z2 = z2, z1
        return (normalize_angle(cmath.phase(z1)), normalize_angle(cmath.phase(z2)))

    def translation_length(self) -> float:
        tr = abs(self.trace)
        if tr <= 2.0:
            return 0.0
        return 2.0 * math.acosh(0.5 * tr)

    def axis(self) -> "Geodesic":
        att, rep = self._axis_angles()
        return Geodesic(att, rep)

    def fixed_boundary_points(self) -> tuple[float, float]:
        """(attracting, repelling) angles; hyperbolic maps only."""
        return self._axis_angles()


@dataclass
class IsometryClassification:
    kind: str  # identity | elliptic | parabolic | hyperbolic
    trace: float
    translation_length: float = 0.0
    rotation_angle: float = 0.0
    fixed_point: complex | None = None  # elliptic
    fixed_angle: float | None = None  # parabolic
    attracting: float | None = None  # hyperbolic
    repelling: float | None = None


# ---------------------------------------------------------------------------
# geodesics


class Geodesic:
    """Unordered pair of distinct boundary angles."""

    __slots__ = ("theta1", "theta2")

    def __init__(self, t1: float, t2: float):
        t1 = normalize_angle(t1)
        t2 = normalize_angle(t2)
        if angle_gap(t1, t2) < TOL_ANGLE:
            raise ValueError(f"degenerate geodesic: endpoints {t1}, {t2} coincide")
        if t1 > t2:
            t1, t2 = t2, t1
        self.theta1 = t1
        self.theta2 = t2

    def endpoints(self) -> tuple[float, float]:
        return (self.theta1, self.theta2)

    def __repr__(self):
        return f"Geodesic({self.theta1:.6f}, {self.theta2:.6f})"

    def key(self, digits: int = 7) -> tuple[float, float]:
        """Rounded canonical key for dict/set deduplication."""
        return (round(self.theta1, digits), round(self.theta2, digits))

    def __eq__(self, other):
        return (
            isinstance(other, Geodesic)
            and angle_gap(self.theta1, other.theta1) < TOL_ANGLE
            and angle_gap(self.theta2, other.theta2) < TOL_ANGLE
        )

    def __hash__(self):
        return hash(self.key())


def geodesic_through_points(z1: complex, z2: complex) -> Geodesic:
    """The complete geodesic through two distinct interior points."""
    cross = (z1.conjugate() * z2).imag
    if abs(cross) < 1e-14:
        # collinear with the origin: a diameter
        direction = cmath.phase(z2 - z1)
        return Geodesic(direction, direction + math.pi)
    s1 = 0.5 * (1.0 + abs(z1) ** 2)
    s2 = 0.5 * (1.0 + abs(z2) ** 2)
    # center of the orthogonal circle: Re(conj(z_i) c) = s_i
    x = (s1 * z2.imag - s2 * z1.imag) / cross
    y = (z1.real * s2 - z2.real * s1) / cross
    c = complex(x, y)
    ac = abs(c)
    t = math.sqrt(max(ac * ac - 1.0, 0.0))
    u1 = c / ac**2 + 1j * (c / ac) * (t / ac)
    u2 = c / ac**2 - 1j * (c / ac) * (t / ac)
    return Geodesic(cmath.phase(u1), cmath.phase(u2))


def frame(from_angle: float, to_angle: float) -> Isometry:
    """Isometry taking the geodesic (from, to) to the real diameter.

    The 'from' endpoint goes to angle pi (the point -1) and 'to' goes to
    angle 0 (the point +1).  Used to normalize pairwise geodesic
    computations: in the upper-half-plane coordinates of the image the
    geodesic becomes the axis (0, infinity).
    """
    delta = math.remainder(to_angle - from_angle, TWO_PI)  # (-pi, pi]
    if abs(delta) < TOL_ANGLE:
        raise ValueError("degenerate geodesic")
    rot1 = Isometry.rotation(-(from_angle + 0.5 * delta))
    # after rot1 the endpoints sit at +-delta/2; the geodesic crosses the
    # real axis orthogonally at x0 = tan(pi/4 - |delta|/4)
    x0 = math.tan(0.25 * math.pi - 0.25 * abs(delta))
    shift = Isometry(1.0, -x0) if x0 != 0.0 else Isometry.identity()
    f = Isometry.rotation(-0.5 * math.pi) * shift * rot1
    if angle_gap(f.apply_angle(from_angle), math.pi) > 1e-6:
        f = Isometry.rotation(math.pi) * f
    return f


def uhp_point(w: complex) -> complex:
    """Disk point -> upper half plane point under z |-> i(1+z)/(1-z)."""
    return 1j * (1.0 + w) / (1.0 - w)


def uhp_foot(theta: float) -> float:
    """Boundary angle -> real foot under the same map; angle 0 -> +inf."""
    half = 0.5 * theta
    s = math.sin(half)
    if abs(s) < 1e-15:
        return math.inf
    return -math.cos(half) / s


# -- pairwise relations


LINKED = "linked"
UNLINKED = "unlinked"
SHARED = "shared_endpoint"


def linking(g1: Geodesic, g2: Geodesic, tol: float = TOL_ANGLE) -> str:
    """Whether the endpoint pairs separate each other on the circle."""
    for s in g1.endpoints():
        for t in g2.endpoints():
            if angle_gap(s, t) < tol:
                return SHARED
    a1, a2 = g1.endpoints()
    inside = 0
    for t in g2.endpoints():
        # is t in the arc (a1, a2) running counterclockwise?
        if normalize_angle(t - a1) < normalize_angle(a2 - a1):
            inside += 1
    return LINKED if inside == 1 else UNLINKED


def _feet_in_frame(g1: Geodesic, g2: Geodesic) -> tuple[float, float]:
    f = frame(g1.theta1, g1.theta2)
    p = uhp_foot(f.apply_angle(g2.theta1))
    q = uhp_foot(f.apply_angle(g2.theta2))
    return p, q


def geodesic_distance(g1: Geodesic, g2: Geodesic, tol: float = TOL_ANGLE) -> float:
    """Distance between two complete geodesics (0 if they meet or share an end)."""
    rel = linking(g1, g2, tol)
    if rel != UNLINKED:
        return 0.0
    p, q = _feet_in_frame(g1, g2)
    if math.isinf(p) or math.isinf(q):
        # numerically shared endpoint that escaped the angular test
        return 0.0
    lo, hi = min(p, q), max(p, q)
    ratio = abs(lo + hi) / (hi - lo)
    if ratio <= 1.0:
        return 0.0
    return math.acosh(ratio)


def projection_length(g1: Geodesic, g2: Geodesic, tol: float = TOL_ANGLE) -> float:
    """Length of the orthogonal projection of g2 onto g1.

    Shared endpoints (asymptotic geodesics) and crossing geodesics have
    unbounded shadow and return float('inf').
    """
    rel = linking(g1, g2, tol)
    if rel != UNLINKED:
        return math.inf
    p, q = _feet_in_frame(g1, g2)
    if math.isinf(p) or math.isinf(q) or p == 0.0 or q == 0.0:
        return math.inf
    return abs(math.log(abs(q / p)))


def crossing_parameter(g1: Geodesic, g2: Geodesic) -> float:
    """Signed position along g1 of the crossing with g2.

    Parametrized by arc length, zero at the point of g1 closest to the frame
    origin, increasing toward the endpoint with the larger canonical angle.
    Raises if the geodesics do not cross.
    """
    if linking(g1, g2) != LINKED:
        raise ValueError("geodesics do not cross")
    p, q = _feet_in_frame(g1, g2)
    if math.isinf(p) or math.isinf(q):
        raise ValueError("crossing at infinity; geodesics nearly share an endpoint")
    return 0.5 * math.log(abs(p * q))


def point_to_geodesic_distance(z: complex, g: Geodesic) -> float:
    f = frame(g.theta1, g.theta2)
    w = f.apply(z)
    # distance from w to the real diameter: sinh(d) = 2|Im w| / (1 - |w|^2)
    denom = 1.0 - abs(w) ** 2
    return math.asinh(2.0 * abs(w.imag) / denom)


def disk_distance(z: complex, w: complex) -> float:
    num = abs(z - w)
    den = abs(1.0 - w.conjugate() * z)
    return 2.0 * math.atanh(num / den)


def collar_width(length: float) -> float:
    """Half width of the standard embedded collar of a closed geodesic.

    Derived from the projection criterion: a geodesic at distance delta from
    the axis casts a shadow of length 2*log(coth(delta/2)) on it; requiring
    the shadow to exceed the translation length gives
    arccosh(coth(length/2)) = arcsinh(1/sinh(length/2)).
    """
    return math.asinh(1.0 / math.sinh(0.5 * length))


# ---------------------------------------------------------------------------
# scaled matrices for very long words

# A scaled matrix is a tuple (a, b, L): the true SU(1,1) matrix is
# e^L * [[a, b], [conj(b), conj(a)]] with |a|^2 + |b|^2 = 1.  Products
# renormalize at every step, so words of length 10^5 (matrix entries around
# e^(10^5)) stay representable.


def scaled_from_isometry(g: Isometry) -> tuple[complex, complex, float]:
    if g.reversing:
        raise ValueError("scaled form is for orientation-preserving maps")
    s = math.sqrt(abs(g.alpha) ** 2 + abs(g.beta) ** 2)
    return (g.alpha / s, g.beta / s, math.log(s))


def scaled_mul(m1, m2):
    a1, b1, l1 = m1
    a2, b2, l2 = m2
    a = a1 * a2 + b1 * b2.conjugate()
    b = a1 * b2 + b1 * a2.conjugate()
    s = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    return (a / s, b / s, l1 + l2 + math.log(s))


def scaled_inverse(m):
    a, b, l = m
    return (a.conjugate(), -b, l)


def scaled_conjugate(h, m):
    """h m h^-1 for scaled matrices."""
    return scaled_mul(scaled_mul(h, m), scaled_inverse(h))


def scaled_axis(m) -> tuple[float, float]:
    """(attracting, repelling) angles of the axis of a scaled hyperbolic matrix."""
    a, b, _ = m
    im = a.imag
    disc = abs(b) ** 2 - im * im
    if disc <= 0.0:
        raise ValueError("scaled matrix is not hyperbolic")
    sq = math.sqrt(disc)
    c = b.conjugate()
    z1 = (1j * im + sq) / c
    z2 = (1j * im - sq) / c
    d = a.conjugate()
    if abs(c * z1 + d) < abs(c * z2 + d):
        z1, z2 = z2, z1
    return (normalize_angle(cmath.phase(z1)), normalize_angle(cmath.phase(z2)))


def scaled_translation_length(m) -> float:
    a, _, l = m
    x = abs(a.real)  # |trace|/2 = x * e^l
    if l < 300.0:
        half_tr = x * math.exp(l)
        if half_tr <= 1.0:
            return 0.0
        return 2.0 * math.acosh(half_tr)
    return 2.0 * (l + math.log(2.0 * x))


def scaled_is_hyperbolic(m, tol: float = TOL_ANGLE) -> bool:
    a, b, l = m
    half_tr_log = math.log(abs(a.real)) + l if a.real != 0.0 else -math.inf
    if half_tr_log > 1.0:  # |trace| > 2e, comfortably hyperbolic
        return True
    return abs(a.real) * math.exp(l) > 1.0 + tol


# ---------------------------------------------------------------------------
# batched (numpy) helpers: arrays of SU(1,1) matrices as (alpha, beta) pairs


def batch_mul(a1, b1, a2, b2):
    a = a1 * a2 + b1 * np.conj(b2)
    b = a1 * b2 + b1 * np.conj(a2)
    n = np.sqrt(np.abs(a) ** 2 - np.abs(b) ** 2)
    return a / n, b / n


def batch_apply_angle(a, b, theta):
    z = np.exp(1j * np.asarray(theta))
    w = (a * z + b) / (np.conj(b) * z + np.conj(a))
    return np.mod(np.angle(w), TWO_PI)


def batch_axis(a, b):
    """Axes of an array of matrices: (attracting, repelling) angle arrays.

    Entries that are not hyperbolic come back as NaN.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    im = a.imag
    disc = np.abs(b) ** 2 - im * im
    hyp = (disc > 0) & (np.abs(a.real) > 1.0)
    sq = np.sqrt(np.where(hyp, disc, 1.0))
    c = np.conj(b)
    with np.errstate(divide="ignore", invalid="ignore"):
        z1 = (1j * im + sq) / c
        z2 = (1j * im - sq) / c
    d = np.conj(a)
    swap = np.abs(c * z1 + d) < np.abs(c * z2 + d)
    att = np.where(swap, z2, z1)
    rep = np.where(swap, z1, z2)
    t1 = np.where(hyp, np.mod(np.angle(att), TWO_PI), np.nan)
    t2 = np.where(hyp, np.mod(np.angle(rep), TWO_PI), np.nan)
    return t1, t2


def batch_displacement(a, b):
    """d(0, g*0) for an array of matrices: 2*arcsinh(|beta|)."""
    return 2.0 * np.arcsinh(np.abs(b))
