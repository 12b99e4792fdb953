"""Orbit dynamics, invariant laminations, and boundary fixed points.

The engine behind the classification: iterate a mapping class on a curve
class, detect periodicity, assemble the reduction system, approximate the
attracting/repelling laminations by axis translates of deep orbit curves,
survey the complementary crown regions, and analyze fixed points of the
boundary circle map of an anchored lift.

Numerical backbone:

* Orbit curves grow like lambda^n letters, so every boundary angle is
  computed through scaled matrices.  A conjugate u * core * u^-1 is split
  first: the cyclically reduced core has a well-conditioned axis, and the
  conjugator acts on angles as a Moebius map in which the scale factor
  cancels.  Extracting the axis of the unsplit word instead loses the
  endpoint pair to cancellation once the conjugator exceeds ~15 letters.
* Leaf sets are compared in the endpoint metric (Euclidean on angle pairs,
  both orientations inserted) with periodic KD-trees, so stage residuals
  cost N log N rather than N^2.
* The crown census works in the cusp chart, where the parabolic holonomy
  is x -> x + t on the real line: leaves become intervals, the region
  around the cusp is bounded by the chain of inclusion-maximal intervals,
  and ideal vertices are the shared-endpoint clusters of that chain, all
  counted per period t.
"""

import math
import cmath
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .curves import (
    CurveClass,
    axis_translates_near_origin,
    enumerate_simple_closed_geodesics,
    geometric_intersection,
)
from .hyperbolic import (
    LINKED,
    SHARED,
    TOL_ANGLE,
    Geodesic,
    angle_gap,
    collar_width,
    geodesic_distance,
    scaled_axis,
)
from .words import exponent_sums, free_reduce, inverse_word

TWO_PI = 2.0 * math.pi

# Residual below which a lamination approximation counts as converged.
CONVERGENCE_RESIDUAL = 1e-4
# Semi-isolated leaves are pruned when one side is leaf-free at this
# multiple of the final residual.
PRUNE_COLLAR_FACTOR = 10.0
# Ideal-vertex clusters merge endpoint angles within this multiple of
# TOL_ANGLE (or of the residual, whichever is coarser).
VERTEX_CLUSTER_FACTOR = 5.0


# ---------------------------------------------------------------------------
# stable boundary-angle evaluation


def split_conjugate(word: str) -> tuple[str, str]:
    """Write a reduced word as u * core * u^-1 with core cyclically reduced."""
    u = ""
    while len(word) >= 2 and word[0] == word[-1].swapcase():
        u += word[0]
        word = word[1:-1]
    return u, word


def scaled_apply_angle(m, theta: float) -> float:
    """Boundary action of a scaled matrix; the e^L factor cancels."""
    a, b, _ = m
    z = cmath.exp(1j * theta)
    w = (a * z + b) / (b.conjugate() * z + a.conjugate())
    return math.atan2(w.imag, w.real)


def attracting_angle(surface, word: str) -> float:
    """Attracting fixed angle of a hyperbolic deck word, at any length.

    Splits off the conjugator first: the axis of the cyclic core stays
    near the origin, and the conjugator moves angles stably.
    """
    u, core = split_conjugate(word)
    if not core:
        raise ValueError("trivial word has no axis")
    theta = scaled_axis(surface.scaled_element(core))[0]
    if u:
        theta = scaled_apply_angle(surface.scaled_element(u), theta)
    return theta % TWO_PI


def is_peripheral_word(surface, word: str) -> bool:
    """Whether the word is conjugate to a power of a cusp/boundary word."""
    core = split_conjugate(word)[1]
    if not core:
        return True
    for base in list(surface.cusp_words) + list(surface.boundary_words):
        for rep in (base, inverse_word(base)):
            if len(core) % len(rep) == 0:
                k = len(core) // len(rep)
                for j in range(len(rep)):
                    if (rep[j:] + rep[:j]) * k == core:
                        return True
    return False


# ---------------------------------------------------------------------------
# orbits


@dataclass
class OrbitRecord:
    """Forward orbit sigma_n = f^n(sigma) with period and crossing data."""

    seed: CurveClass
    images: list
    period: int | None
    intersection_table: list | None
    truncated: bool = False

    def is_periodic(self) -> bool:
        return self.period is not None


def orbit(mc, seed, max_iterations: int = 12,
          with_intersections: bool = True,
          max_letters: int | None = None) -> OrbitRecord:
    """Iterate the mapping class on a curve class.

    The orbit map is invertible, so a cycle must return to the seed; the
    period is the least n with sigma_n = sigma_0 as unoriented classes.

    max_letters stops the iteration before an image word would exceed
    that many letters (the next length is bounded above by summing the
    generator-image lengths letterwise, so the overshoot word is never
    materialised); the record is then marked truncated.
    """
    if isinstance(seed, str):
        seed = CurveClass.from_word(mc.surface, seed)
    if max_iterations < 1:
        raise ValueError("need at least one iteration")
    images = [seed]
    period = None
    truncated = False
    image_len = {}
    for g, w in mc.images.items():
        image_len[g] = len(w)
        image_len[g.upper()] = len(w)
    cur = seed
    for n in range(1, max_iterations + 1):
        if max_letters is not None:
            bound = sum(image_len[ch] for ch in cur.word)
            if bound > max_letters and len(cur.word) > len(seed.word):
                truncated = True
                break
        cur = mc.push_forward(cur)
        images.append(cur)
        if cur == seed:
            period = n
            break
        if max_letters is not None and len(cur.word) > max_letters:
            truncated = True
            break
    table = None
    if with_intersections:
        table = [geometric_intersection(seed, im) for im in images]
    return OrbitRecord(seed, images, period, table, truncated)


# ---------------------------------------------------------------------------
# spiraling trichotomy


EQUAL = "equal"
SPIRALS = "spirals"
TRANSVERSE = "transverse"
FAR_DISJOINT = "far_disjoint"


def _nearest_translate_distance(curve, start_radius: float = 2.0) -> float:
    """Distance from the origin to the nearest axis translate."""
    r = start_radius
    while r <= 34.0:
        hits = axis_translates_near_origin(curve, r)
        if hits:
            return min(h.dist for h in hits)
        r += 2.0
    raise RuntimeError(f"no axis translate of {curve.word!r} within "
                       "radius 34; malformed surface data?")


def spiral_classify(surface, tau, gamma, tol: float = TOL_ANGLE) -> str:
    """How a simple geodesic tau sits relative to a simple closed gamma.

    Returns "equal", "spirals" (a lift shares an axis endpoint),
    "transverse" (linked lifts), or "far_disjoint" (distance above the
    collar width of gamma).  A disjoint non-spiraling geodesic cannot
    enter the collar, so a sub-collar distance without a shared endpoint
    is classified as spiraling: entering the collar without crossing
    forces the projection to wrap, which is the spiraling criterion.
    """
    if isinstance(gamma, str):
        gamma = CurveClass.from_word(surface, gamma)
    if isinstance(tau, str):
        tau = CurveClass.from_word(surface, tau)
    if isinstance(tau, CurveClass) and tau == gamma:
        return EQUAL

    if isinstance(tau, CurveClass):
        d_tau = _nearest_translate_distance(tau)
        extra = 0.5 * (tau.length + gamma.length)
    else:
        gap = angle_gap(tau.theta1, tau.theta2)
        d_tau = 0.0 if gap >= math.pi - 1e-12 else \
            math.acosh(1.0 / math.sin(0.5 * gap))
        extra = 0.5 * gamma.length
    d_gamma = _nearest_translate_distance(gamma)
    # a window holding a full period of each axis sees the minimizing pair
    radius = max(d_tau, d_gamma) + extra + 1.0
    if isinstance(tau, CurveClass):
        tau_leaves = [Geodesic(h.att_angle, h.rep_angle)
                      for h in axis_translates_near_origin(tau, radius)]
    else:
        tau_leaves = [tau]
    gamma_translates = [Geodesic(h.att_angle, h.rep_angle)
                        for h in axis_translates_near_origin(gamma, radius)]

    min_dist = math.inf
    saw_shared = False
    from .hyperbolic import linking

    for t in tau_leaves:
        for g in gamma_translates:
            rel = linking(t, g, tol)
            if rel == LINKED:
                return TRANSVERSE
            if rel == SHARED:
                saw_shared = True
            else:
                min_dist = min(min_dist, geodesic_distance(t, g, tol))
    if saw_shared:
        return SPIRALS
    eps = collar_width(gamma.length)
    if min_dist <= eps:
        return SPIRALS
    return FAR_DISJOINT


# ---------------------------------------------------------------------------
# reduction system


@dataclass
class ReductionResult:
    """Gamma within budget: isolated periodic classes, plus the evidence."""

    gamma: list
    gamma_prime: list
    metadata: dict = field(default_factory=dict)


def _homology_compatible(h: np.ndarray, v: np.ndarray, max_period: int) -> bool:
    """Necessary condition for periodicity: some power fixes +-v."""
    if not v.any():
        return True
    m = h.copy()
    for _ in range(max_period):
        if np.array_equal(m @ v, v) or np.array_equal(m @ v, -v):
            return True
        m = m @ h
    return False


def _word_orbit_period(mc, curve, max_period: int, length_cap: int):
    """Orbit classes up to the period, or None when aperiodic in budget."""
    images = [curve]
    cur = curve
    for _ in range(max_period):
        cur = mc.push_forward(cur)
        if cur == curve:
            return images
        if len(cur.word) > length_cap:
            return None
        images.append(cur)
    return None


def reduction_system(surface, mc, max_word_length: int = 6,
                     max_period: int = 12,
                     extra_candidates=()) -> ReductionResult:
    """Isolated periodic curve classes within the word/period budget.

    Gamma' collects every enumerated class whose orbit closes up within
    max_period (whole orbits are kept, so Gamma' is f-invariant even when
    an image leaves the enumeration budget).  Gamma keeps the members
    disjoint from every other member of Gamma'; f permutes Gamma' and
    preserves crossing numbers, so Gamma is f-invariant, which is also
    verified directly.

    extra_candidates extends the enumerated pool with caller-supplied
    classes (for instance curves read off from fixed homology vectors)
    whose words may exceed the enumeration budget.
    """
    if max_word_length < 1 or max_period < 1:
        raise ValueError("budgets must be at least 1")
    candidates = enumerate_simple_closed_geodesics(surface, max_word_length)
    known = {c.word for c in candidates}
    for extra in extra_candidates:
        if extra.word not in known:
            known.add(extra.word)
            candidates.append(extra)
    h = mc.homology_matrix()
    letters = surface.letters
    length_cap = max(300, 50 * max_word_length)

    gamma_prime = []
    seen = set()
    cap_hits = 0
    screened = 0
    for c in candidates:
        v = np.array(exponent_sums(c.word, letters), dtype=int)
        if not _homology_compatible(h, v, max_period):
            screened += 1
            continue
        members = _word_orbit_period(mc, c, max_period, length_cap)
        if members is None:
            cap_hits += 1
            continue
        for m in members:
            if m not in seen:
                seen.add(m)
                gamma_prime.append(m)
    gamma_prime.sort(key=lambda c: c.sort_key())

    gamma = []
    for c in gamma_prime:
        if all(geometric_intersection(c, d) == 0
               for d in gamma_prime if d is not c):
            gamma.append(c)

    image = sorted((mc.push_forward(c) for c in gamma),
                   key=lambda c: c.sort_key())
    if image != gamma:
        raise RuntimeError("reduction system is not f-invariant: "
                           f"{[c.word for c in gamma]} -> "
                           f"{[c.word for c in image]}")
    meta = {
        "max_word_length": max_word_length,
        "max_period": max_period,
        "candidates": len(candidates),
        "screened_by_homology": screened,
        "aperiodic_or_capped": cap_hits,
        "note": "Gamma within budget; completeness over all simple "
                "classes is not claimed",
    }
    return ReductionResult(gamma, gamma_prime, meta)


# ---------------------------------------------------------------------------
# lamination approximation


@dataclass
class LaminationApprox:
    """Leaf set of one lamination inside a fixed disk window."""

    direction: str
    leaves: list
    depth: int
    hausdorff_residual: float
    pruned: list
    seed: CurveClass = None
    window_radius: float = 0.0
    residual_history: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    final_curve: CurveClass = None
    converged: bool = False
    metadata: dict = field(default_factory=dict)


def _leaf_arrays(hits):
    """(n, 2) angle array plus distance array from collector output."""
    if not hits:
        return np.zeros((0, 2)), np.zeros(0)
    ang = np.array([[h.att_angle % TWO_PI, h.rep_angle % TWO_PI]
                    for h in hits])
    dist = np.array([h.dist for h in hits])
    return ang, dist


def _doubled_tree(angles: np.ndarray) -> cKDTree:
    """KD-tree over both orientations of each endpoint pair, 2pi-periodic."""
    doubled = np.vstack([angles, angles[:, ::-1]])
    return cKDTree(np.mod(doubled, TWO_PI), boxsize=TWO_PI)


def _half_hausdorff(query: np.ndarray, tree: cKDTree) -> float:
    if len(query) == 0:
        return 0.0
    d, _ = tree.query(np.mod(query, TWO_PI))
    return float(np.max(d))


def leaf_set_distance(a: np.ndarray, b: np.ndarray,
                      a_core=None, b_core=None) -> float:
    """Hausdorff distance between leaf sets in the endpoint metric.

    Comparisons run from the core rows of each set into the full other
    set, so leaves drifting across the window edge do not dominate.
    """
    ta, tb = _doubled_tree(a), _doubled_tree(b)
    qa = a if a_core is None else a[a_core]
    qb = b if b_core is None else b[b_core]
    return max(_half_hausdorff(qa, tb), _half_hausdorff(qb, ta))


def lamination_approx(surface, mc, seed, direction: str = "+",
                      depth: int = 12, window_radius: float = 2.0,
                      convergence_residual: float = CONVERGENCE_RESIDUAL,
                      min_depth: int = 8) -> LaminationApprox:
    """Approximate the invariant lamination by deep orbit axis translates.

    Stage n collects every translate of the axis of sigma_n that passes
    within window_radius of the origin; the residual is the Hausdorff
    distance between consecutive stages (core leaves against the full
    neighbor stage).  Stops early once the residual converges, but not
    before min_depth stages, so the window carries enough distinct leaves
    for the census even when convergence is immediate.  Leaves facing a
    resolved gap on one side are semi-isolated and moved to `pruned`.
    """
    if direction not in ("+", "-"):
        raise ValueError(f"direction must be '+' or '-', not {direction!r}")
    if depth < 2:
        raise ValueError("need depth >= 2 to measure a residual")
    if isinstance(seed, str):
        seed = CurveClass.from_word(surface, seed)
    step = mc if direction == "+" else mc.inverse()

    warnings = []
    residuals = []
    cur = seed
    prev_ang = prev_dist = None
    ang = dist = None
    hits = []
    used_depth = 0
    converged = False
    core_radius = max(window_radius - 1.0, 0.5 * window_radius)
    for n in range(1, depth + 1):
        cur = step.push_forward(cur)
        if cur == seed:
            raise ValueError(
                f"seed {seed.word!r} is periodic (period {n}) under the "
                "mapping class; lamination approximation requires an "
                "aperiodic orbit")
        hits = axis_translates_near_origin(cur, window_radius)
        ang, dist = _leaf_arrays(hits)
        used_depth = n
        if prev_ang is not None and len(prev_ang) and len(ang):
            res = leaf_set_distance(prev_ang, ang,
                                    prev_dist <= core_radius,
                                    dist <= core_radius)
            residuals.append(res)
            if res < convergence_residual:
                converged = True
                if n >= min_depth:
                    break
        prev_ang, prev_dist = ang, dist
    converged = bool(residuals) and residuals[-1] < convergence_residual
    if not converged and len(residuals) >= 3 and \
            not (residuals[-1] < residuals[-2]
                 or residuals[-1] < residuals[-3]):
        warnings.append("non-convergence: residual did not decrease over "
                        "the last three stages")

    residual = residuals[-1] if residuals else math.inf
    leaves, pruned, prune_width = _prune_semi_isolated(ang, residual)
    meta = {
        "leaf_count_raw": len(ang),
        "prune_width": prune_width,
        "final_homology": list(exponent_sums(cur.word, surface.letters)),
        "final_word_length": len(cur.word),
    }
    return LaminationApprox(
        direction=direction,
        leaves=leaves,
        depth=used_depth,
        hausdorff_residual=residual,
        pruned=pruned,
        seed=seed,
        window_radius=window_radius,
        residual_history=residuals,
        warnings=warnings,
        final_curve=cur,
        converged=converged,
        metadata=meta,
    )


def _dedupe_leaves(angles: np.ndarray):
    """Distinct leaves (translate orbits coincide at float precision)."""
    seen = {}
    for t1, t2 in angles:
        g = Geodesic(t1, t2)
        seen.setdefault(g.key(), g)
    geos = [seen[k] for k in sorted(seen)]
    if not geos:
        return geos, np.zeros((0, 2))
    return geos, np.array([[g.theta1, g.theta2] for g in geos])


def _prune_semi_isolated(angles: np.ndarray, residual: float):
    """Split leaves into (kept, pruned, width) by the one-sided gap test.

    A leaf is semi-isolated when one of its sides is leaf-free at the
    collar width: it bounds a gap the approximation has resolved.  The
    width is PRUNE_COLLAR_FACTOR times the residual or the sampling
    resolution (median nearest-neighbor spacing of distinct leaves),
    whichever is coarser: below the sampling resolution every side looks
    empty, so the residual alone would prune everything once the stages
    converge faster than the window fills in.
    """
    geos, pos = _dedupe_leaves(angles)
    n = len(geos)
    if n < 3 or not math.isfinite(residual):
        return geos, [], 0.0
    tree = _doubled_tree(pos)
    d, _ = tree.query(np.mod(pos, TWO_PI), k=[2])
    r_sample = float(np.median(d))
    width = PRUNE_COLLAR_FACTOR * max(residual, r_sample)
    keep = []
    pruned = []
    # query radius in the Euclidean pair metric: a leaf within max-gap w
    # of another lies within sqrt(2) * w in the pair metric
    qr = math.sqrt(2.0) * width + 1e-12
    for i, (t1, t2) in enumerate(pos):
        idx = tree.query_ball_point([t1 % TWO_PI, t2 % TWO_PI], qr)
        side_hit = [False, False]
        arc = (t2 - t1) % TWO_PI
        for j in idx:
            j0 = j % n
            if j0 == i:
                continue
            u1, u2 = pos[j0]
            g1 = min(angle_gap(t1, u1), angle_gap(t1, u2))
            g2 = min(angle_gap(t2, u1), angle_gap(t2, u2))
            if max(g1, g2) > width:
                continue
            # side of the neighbor: both endpoints in one arc of the leaf
            in1 = ((u1 - t1) % TWO_PI) < arc
            in2 = ((u2 - t1) % TWO_PI) < arc
            if in1 and in2:
                side_hit[0] = True
            elif not in1 and not in2:
                side_hit[1] = True
        if side_hit[0] and side_hit[1]:
            keep.append(geos[i])
        else:
            pruned.append(geos[i])
    return keep, pruned, width


# ---------------------------------------------------------------------------
# transversality and crown census


@dataclass
class CrownRegion:
    type: str
    p: int
    rim: CurveClass | None = None
    nucleus_type: str | None = None


@dataclass
class CrownCensus:
    regions: list
    metadata: dict = field(default_factory=dict)

    def type_multiset(self):
        return sorted((r.type, r.p) for r in self.regions)


@dataclass
class TransversalityReport:
    transverse: bool
    census: CrownCensus


def _angles_of(lam: LaminationApprox) -> np.ndarray:
    leaves = list(lam.leaves) + list(lam.pruned)
    if not leaves:
        return np.zeros((0, 2))
    return np.array([[g.theta1, g.theta2] for g in leaves])


def _deep_mask(angles: np.ndarray, radius: float) -> np.ndarray:
    """Leaves passing within `radius` of the origin."""
    gap = np.abs(angles[:, 0] - angles[:, 1]) % TWO_PI
    gap = np.minimum(gap, TWO_PI - gap)
    with np.errstate(divide="ignore"):
        d = np.where(gap >= math.pi - 1e-12, 0.0,
                     np.arccosh(np.maximum(1.0 / np.sin(0.5 * gap), 1.0)))
    return d <= radius


def _links_any(leaf, angles: np.ndarray, tol: float) -> bool:
    """Whether (t1, t2) interleaves with any row of `angles`."""
    t1, t2 = leaf
    arc = (t2 - t1) % TWO_PI
    r1 = (angles[:, 0] - t1) % TWO_PI
    r2 = (angles[:, 1] - t1) % TWO_PI
    # exclude shared endpoints at tolerance
    near = np.minimum.reduce([r1, TWO_PI - r1, np.abs(r1 - arc)]) < tol
    near |= np.minimum.reduce([r2, TWO_PI - r2, np.abs(r2 - arc)]) < tol
    linked = ((r1 < arc) != (r2 < arc)) & ~near
    return bool(np.any(linked))


def _crown_chain(points_lo, points_hi, period: float, cluster_tol: float):
    """Ideal-vertex count of the region above a chain of intervals.

    Input: interval endpoints on a line with translation x -> x + period.
    The region visible from +infinity is bounded by inclusion-maximal
    intervals; consecutive maximal intervals meeting within cluster_tol
    share an ideal vertex.  Returns (p, gaps): vertices per period and
    any unresolved gaps in the chain.
    """
    lo = np.asarray(points_lo)
    hi = np.asarray(points_hi)
    # wrap every interval so its left end lies in [0, period), then add
    # the two neighbor copies so the chain closes across the seam
    shift = np.floor(lo / period) * period
    lo, hi = lo - shift, hi - shift
    los = np.concatenate([lo - period, lo, lo + period])
    his = np.concatenate([hi - period, hi, hi + period])
    order = np.lexsort((-his, los))
    maximal = []
    best = -np.inf
    for i in order:
        if his[i] > best + 1e-12:
            maximal.append((los[i], his[i]))
            best = his[i]
    vertices = []
    gaps = []
    for (l1, h1), (l2, h2) in zip(maximal, maximal[1:]):
        x = 0.5 * (h1 + l2)
        if abs(h1 - l2) <= cluster_tol:
            vertices.append(x)
        else:
            gaps.append((h1, l2))
    p = sum(1 for v in vertices if 0.0 <= v < period)
    gaps = [g for g in gaps if 0.0 <= 0.5 * (g[0] + g[1]) < period]
    return p, gaps


def _cusp_crowns(surface, lam: LaminationApprox, cluster_tol: float):
    """One crown region per cusp, built in the parabolic chart."""
    from .hyperbolic import uhp_foot

    regions = []
    notes = []
    angles = _angles_of(lam)
    for col in getattr(surface, "cusp_collars", []):
        lo, hi = [], []
        for t1, t2 in angles:
            x = uhp_foot(col.chart.apply_angle(t1))
            y = uhp_foot(col.chart.apply_angle(t2))
            if math.isinf(x) or math.isinf(y):
                continue
            lo.append(min(x, y))
            hi.append(max(x, y))
        if not lo:
            notes.append(f"cusp {col.word!r}: no leaves in chart")
            continue
        # translate cluster tolerance from angles to chart units at the
        # scale of the observed chain
        span = max(abs(min(lo)), abs(max(hi)), col.translation)
        tol_x = max(cluster_tol * (1.0 + span * span), 1e-9)
        p, gaps = _crown_chain(lo, hi, col.translation, tol_x)
        if gaps:
            notes.append(f"cusp {col.word!r}: {len(gaps)} unresolved "
                         "chain gaps")
        regions.append(CrownRegion("punctured_disk", p, None,
                                   "punctured_disk"))
    return regions, notes


def _rim_crowns(surface, lam: LaminationApprox, cluster_tol: float):
    """Crown regions whose rim is a boundary geodesic of the surface."""
    regions = []
    angles = _angles_of(lam)
    if len(angles) == 0:
        return regions
    for word in surface.boundary_words:
        rim = CurveClass.from_word(surface, word)
        translates = axis_translates_near_origin(rim, lam.window_radius)
        shared = 0
        for h in translates:
            for e in (h.att_angle, h.rep_angle):
                g = np.minimum(np.abs(angles - e), TWO_PI -
                               np.abs(angles - e))
                shared += int(np.any(g < cluster_tol))
        if shared:
            regions.append(CrownRegion("crown_with_rim", shared, rim,
                                       "annulus_with_rim"))
    return regions


def transversality_and_census(surface, lam_plus: LaminationApprox,
                              lam_minus: LaminationApprox,
                              gamma=()) -> TransversalityReport:
    """Check transversality of two laminations and survey crown regions.

    Transverse means every deep leaf of one links at least one leaf of
    the other (deep = passing within the core of the window).  The census
    lists one region per cusp per lamination, counted in the parabolic
    chart, plus any crowns rimmed by boundary geodesics.
    """
    for lam in (lam_plus, lam_minus):
        if not lam.converged:
            raise ValueError(
                "census requires converged approximations; residual "
                f"{lam.hausdorff_residual:.2e} after depth {lam.depth}")
    a = _angles_of(lam_plus)
    b = _angles_of(lam_minus)
    tol = max(VERTEX_CLUSTER_FACTOR * TOL_ANGLE,
              PRUNE_COLLAR_FACTOR * max(lam_plus.hausdorff_residual,
                                        lam_minus.hausdorff_residual))
    core = max(lam_plus.window_radius - 1.0, 0.5 * lam_plus.window_radius)
    transverse = len(a) > 0 and len(b) > 0
    if transverse:
        for leaf in a[_deep_mask(a, core)]:
            if not _links_any(leaf, b, TOL_ANGLE):
                transverse = False
                break
    if transverse:
        for leaf in b[_deep_mask(b, core)]:
            if not _links_any(leaf, a, TOL_ANGLE):
                transverse = False
                break

    regions = []
    notes = []
    for lam in (lam_plus, lam_minus):
        crowns, n1 = _cusp_crowns(surface, lam, tol)
        regions.extend(crowns)
        notes.extend(n1)
        regions.extend(_rim_crowns(surface, lam, tol))
    clusters = _shared_endpoint_clusters(a, b, tol)
    meta = {
        "cluster_tol": tol,
        "notes": notes,
        "interior_endpoint_clusters": clusters,
    }
    for r in regions:
        if r.rim is not None:
            rim_ok = any(r.rim == g for g in gamma) or \
                r.rim.word in set(surface.boundary_words)
            if not rim_ok:
                notes.append(f"rim {r.rim.word!r} outside Gamma and the "
                             "boundary")
    return TransversalityReport(transverse, CrownCensus(regions, meta))


def _shared_endpoint_clusters(a: np.ndarray, b: np.ndarray,
                              tol: float) -> int:
    """Number of angle clusters where several leaves end together."""
    ends = np.sort(np.concatenate([a.ravel(), b.ravel()]) % TWO_PI)
    if len(ends) < 2:
        return 0
    gaps = np.diff(ends)
    sizes = []
    run = 1
    for g in gaps:
        if g < tol:
            run += 1
        else:
            sizes.append(run)
            run = 1
    sizes.append(run)
    if len(sizes) > 1 and (ends[0] + TWO_PI - ends[-1]) < tol:
        sizes[0] += sizes.pop()
    return sum(1 for s in sizes if s >= 2)


# ---------------------------------------------------------------------------
# boundary fixed points


@dataclass
class BoundaryFixedPoint:
    angle: float
    kind: str  # "contracting" | "expanding"
    uncertainty: float
    note: str = ""


@dataclass
class BoundaryFixedPointReport:
    power: int
    anchor: str
    fixed_points: list
    interval_structure: list
    alternating: bool
    parabolic_angle: float | None = None
    warnings: list = field(default_factory=list)


def anchor_at_cusp(mc, power: int = 1, cusp_index: int = 0) -> str:
    """Conjugator making the lift of mc^power fix a cusp word exactly.

    phi(R) is conjugate to R; peeling the conjugator and the cyclic
    rotation gives c with c * phi(R) * c^-1 = R, so the post-conjugated
    automorphism fixes the parabolic boundary point of R.
    """
    base = mc.power(power) if power != 1 else mc
    target = mc.surface.cusp_words[cusp_index]
    w = base.apply(target)
    u = ""
    while len(w) > len(target) and w[0] == w[-1].swapcase():
        u += w[0]
        w = w[1:-1]
    if len(w) != len(target):
        raise ValueError(f"image of cusp word {target!r} is not a plain "
                         "conjugate; is the input a mapping class?")
    for j in range(len(target)):
        if target[j:] + target[:j] == w:
            return free_reduce(target[:j] + inverse_word(u))
    raise ValueError(f"cusp word {target!r} maps to {w!r}, not to a "
                     "rotation of itself")


def _sample_words(surface, radius: float):
    words, _, _, _ = surface.deck_ball(radius)
    return [w for w in words if w and not is_peripheral_word(surface, w)]


def anchor_for_two_sided(mc, power: int = 2, target_changes: int = 4,
                         anchor_radius: float = 3.5,
                         sample_radius: float = 5.0) -> str:
    """Deck word anchoring a lift with the two-sided fixed-point pattern.

    A lift fixing an interior leaf of the invariant lamination has
    exactly four boundary fixed points (leaf endpoints plus one expanding
    point on each side).  Candidate anchors are scored by the number of
    cyclic sign changes of the sampled displacement; lifts fixing a cusp
    word are skipped (those show the crown pattern instead).
    """
    surface = mc.surface
    base = mc.power(power)
    samples = []
    for w in _sample_words(surface, sample_radius):
        try:
            samples.append((attracting_angle(surface, w), w))
        except ValueError:
            continue
    samples.sort()
    for c in surface.deck_ball(anchor_radius)[0]:
        if not c:
            continue
        psi = base._post_conjugated(c)
        if any(psi.apply(col.word) == col.word
               for col in getattr(surface, "cusp_collars", [])):
            continue
        signs = []
        for t, w in samples:
            d = _displacement(surface, psi, w, t)
            if d:
                signs.append(d > 0)
        changes = sum(1 for i in range(len(signs))
                      if signs[i] != signs[(i + 1) % len(signs)])
        if changes == target_changes:
            return c
    raise ValueError(f"no anchor with {target_changes} sign changes within "
                     f"radius {anchor_radius}")


def _displacement(surface, psi, word: str, theta: float) -> float:
    img = attracting_angle(surface, psi.apply(word))
    return math.remainder(img - theta, TWO_PI)


def _bisect_bracket(surface, psi, lo_w, lo_t, lo_d, hi_w, hi_t, hi_d,
                    tol: float, max_rounds: int):
    """Shrink a sign-change bracket with freshly built product words.

    Candidate samples inside the bracket come from products of the
    bracket words; their attracting points interpolate between the two
    axes, and the products stay well-conditioned because their endpoint
    pairs do not collapse.
    """
    for _ in range(max_rounds):
        width = (hi_t - lo_t) % TWO_PI
        if width <= tol:
            break
        cands = [free_reduce(j * lo_w + k * hi_w)
                 for j, k in ((1, 1), (2, 1), (1, 2), (3, 1), (1, 3),
                              (2, 3), (3, 2))]
        cands.append(free_reduce(hi_w + lo_w))
        moved = False
        for c in cands:
            if not c or is_peripheral_word(surface, c):
                continue
            try:
                t = attracting_angle(surface, c)
            except ValueError:
                continue
            if not 0.0 < ((t - lo_t) % TWO_PI) < width:
                continue
            d = _displacement(surface, psi, c, t)
            if d == 0.0:
                return t, 0.0
            if (d > 0) == (lo_d > 0):
                lo_w, lo_t, lo_d = c, t, d
            else:
                hi_w, hi_t, hi_d = c, t, d
            moved = True
            break
        if not moved:
            break
    width = (hi_t - lo_t) % TWO_PI
    mid = (lo_t + 0.5 * width) % TWO_PI
    return mid, 0.5 * width


def boundary_fixed_points(mc, leaf: Geodesic | None = None, power: int = 1,
                          anchor: str = "", sample_radius: float = 7.0,
                          refine_tol: float = 1e-8,
                          ) -> BoundaryFixedPointReport:
    """Fixed points of the boundary map of an anchored lift of mc^power.

    The lift is deck(anchor) composed with the canonical lift of
    mc^power; its boundary map sends the attracting point of w to the
    attracting point of the image word.  Sign changes of the sampled
    displacement bracket the fixed points; monotone bisection with
    product words sharpens each bracket.  Contracting means the
    displacement passes + to -, expanding the reverse.  Reports are
    evidence of the samples analyzed: when sampling cannot bracket a
    change, nothing is fabricated.
    """
    surface = mc.surface
    psi = mc.power(power)
    if anchor:
        psi = psi._post_conjugated(anchor)
    if all(psi.images[g] == g for g in surface.letters):
        raise ValueError("anchored lift is the identity: every boundary "
                         "point is fixed; classification refused")

    warnings = []
    # parabolic bookkeeping: does the lift fix a cusp word exactly?
    parabolic_angle = None
    fixed_cusp = None
    for col in getattr(surface, "cusp_collars", []):
        if psi.apply(col.word) == col.word:
            parabolic_angle = col.fixed_angle % TWO_PI
            fixed_cusp = col
            break

    samples = []
    for w in _sample_words(surface, sample_radius):
        try:
            t = attracting_angle(surface, w)
        except ValueError:
            continue
        d = _displacement(surface, psi, w, t)
        samples.append((t % TWO_PI, d, w))
    samples.sort()
    if not samples:
        raise ValueError("no hyperbolic samples available")

    # sign changes between consecutive nonzero displacements bracket the
    # fixed points; zero-displacement samples inside a change are words
    # fixed exactly by the lift (their axis is invariant) and give the
    # fixed point with no further work
    points = []
    brackets = []
    nz = [i for i, s in enumerate(samples) if s[1] != 0.0]
    for k in range(len(nz)):
        i, j = nz[k], nz[(k + 1) % len(nz)]
        t1, d1, w1 = samples[i]
        t2, d2, w2 = samples[j]
        if (d1 > 0) == (d2 > 0):
            continue
        kind = "contracting" if d1 > 0 else "expanding"
        zeros = samples[i + 1:j] if i < j else samples[i + 1:] + samples[:j]
        if zeros:
            lo, hi = zeros[0][0], zeros[-1][0]
            half = 0.5 * ((hi - lo) % TWO_PI)
            points.append(BoundaryFixedPoint((lo + half) % TWO_PI, kind,
                                             half, "exact sample"))
        else:
            brackets.append((kind, (w1, t1, d1), (w2, t2, d2)))
    if not points and not brackets:
        warnings.append("sampling too sparse to bracket any sign change; "
                        "inconclusive")

    for kind, (w1, t1, d1), (w2, t2, d2) in brackets:
        ang, unc = _bisect_bracket(surface, psi, w1, t1, d1, w2, t2, d2,
                                   refine_tol, max_rounds=60)
        points.append(BoundaryFixedPoint(ang, kind, unc))
    if parabolic_angle is not None:
        # the anchored parabolic point is an exact fixed point; it shows
        # up inside the expanding bracket that spans it
        for pt in points:
            lo = (pt.angle - pt.uncertainty) % TWO_PI
            if 0.0 <= (parabolic_angle - lo) % TWO_PI <= 2 * pt.uncertainty:
                pt.angle = parabolic_angle
                pt.uncertainty = 0.0
                pt.note = "parabolic anchor point"
                break
        else:
            points.append(BoundaryFixedPoint(parabolic_angle, "expanding",
                                             0.0, "parabolic anchor point"))
            points.sort(key=lambda p: p.angle)

    points.sort(key=lambda p: p.angle)
    kinds = [p.kind for p in points]
    alternating = len(points) > 0 and all(
        kinds[i] != kinds[(i + 1) % len(kinds)] for i in range(len(kinds)))

    intervals = []
    contracting = [p for p in points if p.kind == "contracting"]
    if contracting and alternating:
        m = len(contracting)
        for i in range(m):
            a_prev = contracting[i - 1]
            a_next = contracting[i]
            width = (a_next.angle - a_prev.angle) % TWO_PI
            inside = [p for p in points if p.kind == "expanding"
                      and 0.0 < (p.angle - a_prev.angle) % TWO_PI < width]
            intervals.append({
                "from": a_prev.angle,
                "to": a_next.angle,
                "expanding": [p.angle for p in inside],
            })

    if leaf is not None:
        ok = 0
        for e in (leaf.theta1, leaf.theta2):
            if any(p.kind == "contracting" and
                   angle_gap(p.angle, e) <= max(10 * p.uncertainty, 1e-6)
                   for p in points):
                ok += 1
        if ok != 2:
            warnings.append("leaf endpoints do not match the contracting "
                            f"fixed points ({ok}/2 matched)")

    return BoundaryFixedPointReport(
        power=power,
        anchor=anchor,
        fixed_points=points,
        interval_structure=intervals,
        alternating=alternating,
        parabolic_angle=parabolic_angle,
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# dilatation


@dataclass
class DilatationEstimate:
    value: float
    error_bar: float
    exponential: bool
    ratios: list


def dilatation_estimate(record: OrbitRecord,
                        probe: CurveClass | None = None) -> DilatationEstimate:
    """Growth rate of crossing numbers along an aperiodic orbit.

    Geometric mean of successive intersection ratios over the last half
    of the table, with the ratio spread as the error bar.  The growth is
    flagged exponential only when a straight-line fit of log i(n) against
    n beats the polynomial alternative (log i against log n).
    """
    if record.is_periodic():
        raise ValueError("periodic orbit has no dilatation")
    if probe is None or probe == record.seed:
        table = record.intersection_table
        if table is None:
            table = [geometric_intersection(record.seed, im)
                     for im in record.images]
    else:
        table = [geometric_intersection(probe, im) for im in record.images]
    pos = [(n, v) for n, v in enumerate(table) if v > 0]
    if len(pos) < 3:
        raise ValueError("intersection table has no usable growth data")

    ns = np.array([n for n, _ in pos], dtype=float)
    vs = np.array([v for _, v in pos], dtype=float)
    ratios = vs[1:] / vs[:-1]
    half = ratios[len(ratios) // 2:]
    value = float(np.exp(np.mean(np.log(half))))
    error_bar = float(np.max(half) - np.min(half))

    logv = np.log(vs)
    res_exp = _fit_residual(ns, logv)
    res_poly = _fit_residual(np.log(ns + 1.0), logv)
    exponential = res_exp < res_poly
    return DilatationEstimate(value, error_bar, exponential, list(ratios))


def _fit_residual(x: np.ndarray, y: np.ndarray) -> float:
    coef = np.polyfit(x, y, 1)
    return float(np.sum((np.polyval(coef, x) - y) ** 2))
