"""Trichotomy classification of mapping classes.

Every mapping class of a finite-type hyperbolic surface is periodic,
reducible, or pseudo-Anosov.  The decision procedure here follows the
structure of that trichotomy at a declared budget:

1.  Compute a reduction system Gamma (isolated periodic curve classes
    within the enumeration/period budget, plus curves suggested by fixed
    homology vectors).  A nonempty Gamma certifies **Reducible**: the
    surface is cut along Gamma, each complementary piece gets a
    signature by cut arithmetic, and the induced dynamics on each piece
    is classified recursively (capped depth).

2.  If Gamma is empty and every enumerated seed has a closed orbit, the
    class is a candidate periodic map.  That is certified against a
    *filling system*: two transverse systems of disjoint curves whose
    union cuts the surface into disks and once-punctured disks (checked
    by an Euler-characteristic count on the intersection graph).  A
    homeomorphism fixing every member of a filling system up to oriented
    isotopy is isotopic to the identity, so the least power n with that
    property is the certified order and the verdict is **Periodic**.

3.  Otherwise some seed escapes every periodic budget.  Its forward and
    backward iterates are fed to the lamination machinery: convergence
    of both limits, transversality, the complementary-region census, a
    boundary-circle spot check, and exponential growth of intersection
    numbers together certify **PseudoAnosov** with the measured
    dilatation.

Budget exhaustion with *conflicting* evidence (for instance a seed that
looks aperiodic while the growth data is polynomial) never guesses: the
verdict is **Indeterminate** and the evidence list records the conflict.

A screen profile supports bulk sweeps: it keeps the reduction and
periodicity logic exact but replaces the lamination/dilatation stage by
the exponential-growth test on canonical word lengths (combinatorial
length is comparable to geodesic length, whose growth rate is the
dilatation).  Screen verdicts carry no dilatation value and say so in
their evidence.

Verdicts serialize to JSON with a fixed key set {kind, order?,
dilatation?, gamma, components, evidence, budgets}; floats are rounded
to 12 significant digits so reruns are byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .curves import (
    CurveClass,
    enumerate_simple_closed_geodesics,
    geometric_intersection,
    torus_slope_word,
)
from .dynamics import (
    orbit,
    reduction_system,
    lamination_approx,
    transversality_and_census,
    dilatation_estimate,
    boundary_fixed_points,
    anchor_at_cusp,
)
from .words import exponent_sums

PERIODIC = "Periodic"
PSEUDO_ANOSOV = "PseudoAnosov"
REDUCIBLE = "Reducible"
INDETERMINATE = "Indeterminate"


# ---------------------------------------------------------------------------
# budgets


@dataclass(frozen=True)
class Budgets:
    """Resource limits for one classification run.

    max_word_length   enumeration budget for candidate curves
    max_period        orbit length after which a seed counts as aperiodic
    depth             iteration depth for laminations and growth tables
    max_n             largest power tried when certifying a periodic order
    max_letters       cap on image-word length before an orbit is truncated
    min_depth         minimum lamination depth before early convergence stop
    recursion_cap     nesting limit for reducible component analysis
    screen            replace the lamination stage by the word-growth test
    boundary_check    run the boundary-circle fixed-point spot check
    """

    max_word_length: int = 6
    max_period: int = 12
    depth: int = 12
    max_n: int = 24
    max_letters: int = 400_000
    min_depth: int = 8
    recursion_cap: int = 4
    screen: bool = False
    boundary_check: bool = True

    @classmethod
    def screen_profile(cls) -> "Budgets":
        """Cheap profile for verdict-kind sweeps over many words.

        The letter budget still admits four growth stages for the
        largest stretch factor a six-twist word can have, which the
        exponential-growth test needs.
        """
        return cls(max_letters=300_000, screen=True, boundary_check=False)

    def as_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class ComponentReport:
    """One complementary piece of the cut along Gamma."""

    signature: tuple  # (genus, boundary, cusps)
    area: float
    n_s: int  # first return time of the piece under the map
    boundary: tuple  # cut curves on its rim (with multiplicity)
    curves: tuple  # catalog classes living in the piece
    sub_verdict: "Verdict"


@dataclass
class Verdict:
    kind: str
    order: int | None = None
    dilatation: float | None = None
    gamma: tuple = ()
    components: tuple = ()
    evidence: list = field(default_factory=list)
    budgets_used: dict = field(default_factory=dict)
    census: list | None = None  # [(region type, count), ...] when computed

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.order is not None:
            out["order"] = int(self.order)
        if self.dilatation is not None:
            out["dilatation"] = round_sig(self.dilatation)
        out["gamma"] = [c.word for c in self.gamma]
        out["components"] = [
            {
                "signature": list(r.signature),
                "area": round_sig(r.area),
                "n_s": int(r.n_s),
                "boundary": list(r.boundary),
                "curves": list(r.curves),
                "verdict": r.sub_verdict.to_dict(),
            }
            for r in self.components
        ]
        out["evidence"] = list(self.evidence)
        out["budgets"] = {k: self.budgets_used[k] for k in sorted(self.budgets_used)}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def round_sig(x: float, digits: int = 12) -> float:
    """Round to a fixed number of significant digits (stable JSON)."""
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


# ---------------------------------------------------------------------------
# filling systems


@dataclass
class FillingSystem:
    """Two transverse curve systems whose union fills the surface."""

    sigma: tuple
    sigma_prime: tuple
    crossings: int
    info: dict

    def members(self):
        return list(self.sigma) + list(self.sigma_prime)


def filling_certificate(surface, sigma, sigma_prime):
    """Check that sigma and sigma' can only fill the surface.

    Necessary conditions from the Euler-characteristic count of the
    four-valent graph G = sigma union sigma' with V vertices (crossings)
    and E = 2V edges.  If every complementary face were a disk or a
    once-punctured disk / half-open boundary annulus, then

        chi(S) = V - E + f_disk  =>  f_disk = chi(S) + V >= 0,

    with one punctured face per cusp and one annular face per boundary
    circle, so the total face count f_disk + b + c must be positive.
    The graph must also be connected (a face meeting two different
    graph components has a disconnected boundary walk, so it is neither
    a disk nor a once-punctured disk) and the members must span the full
    genus part of homology (a filling union enters every handle).
    """
    sigma = list(sigma)
    sigma_prime = list(sigma_prime)
    if not sigma or not sigma_prime:
        return False, {"reason": "a system is empty"}
    for system in (sigma, sigma_prime):
        for i, a in enumerate(system):
            for b in system[i + 1:]:
                if geometric_intersection(a, b) != 0:
                    return False, {"reason": f"system members {a.word!r}, "
                                             f"{b.word!r} cross"}
    nodes = sigma + sigma_prime
    crossings = 0
    adj = {i: set() for i in range(len(nodes))}
    for i, a in enumerate(sigma):
        for j, b in enumerate(sigma_prime):
            v = geometric_intersection(a, b)
            crossings += v
            if v:
                adj[i].add(len(sigma) + j)
                adj[len(sigma) + j].add(i)
    # connectivity of the crossing graph
    stack, seen = [0], {0}
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    connected = len(seen) == len(nodes)
    sig = surface.signature
    euler = 2 - 2 * sig.genus - sig.boundary - sig.cusps
    disk_faces = euler + crossings
    faces = disk_faces + sig.boundary + sig.cusps
    vectors = [exponent_sums(c.word, surface.letters) for c in nodes]
    rank = int(np.linalg.matrix_rank(np.array(vectors, dtype=float)))
    ok = connected and disk_faces >= 0 and faces >= 1 and rank >= 2 * sig.genus
    info = {
        "crossings": crossings,
        "disk_faces": disk_faces,
        "faces": faces,
        "connected": connected,
        "homology_rank": rank,
    }
    if not ok:
        info["reason"] = "Euler-characteristic count rejects the pair"
    return ok, info


def default_filling_system(surface, max_word_length: int = 6):
    """Deterministic filling system from the enumerated catalog.

    Sigma is a greedy maximal disjoint system in catalog order; Sigma'
    greedily collects curves disjoint from each other that cross Sigma.
    If the certificate rejects the pair, Sigma is truncated (dropping
    its last members lets Sigma' reach more of the surface) and the
    search repeats.  Returns None when no certified pair exists in the
    catalog.
    """
    catalog = enumerate_simple_closed_geodesics(surface, max_word_length)
    sigma_full = []
    for c in catalog:
        if all(geometric_intersection(c, s) == 0 for s in sigma_full):
            sigma_full.append(c)
    for k in range(len(sigma_full), 0, -1):
        sigma = sigma_full[:k]
        sigma_words = {c.word for c in sigma}
        sigma_prime = []
        for c in catalog:
            if c.word in sigma_words:
                continue
            if any(geometric_intersection(c, s) != 0 for s in sigma_prime):
                continue
            if all(geometric_intersection(c, s) == 0 for s in sigma):
                continue
            sigma_prime.append(c)
        ok, info = filling_certificate(surface, sigma, sigma_prime)
        if ok:
            return FillingSystem(tuple(sigma), tuple(sigma_prime),
                                 info["crossings"], info)
    return None


def periodic_order(surface, mc, fs: FillingSystem, max_n: int = 24):
    """Least n <= max_n with f^n fixing every filling-system member.

    Fixing means equality of oriented conjugacy classes (cyclic normal
    forms with orientation), which for an orientation-preserving
    homeomorphism also pins the two sides of each curve.  Since the
    members fill, such an f^n is isotopic to the identity, so n is the
    exact order.  Returns None if no power works within max_n.
    """
    calc = surface.words
    base = [calc.normal_form(c.word) for c in fs.members()]
    cur = list(base)
    for n in range(1, max_n + 1):
        cur = [mc.apply(w) for w in cur]
        if all(calc.normal_form(w) == w0 for w, w0 in zip(cur, base)):
            return n
    return None


# ---------------------------------------------------------------------------
# homology-suggested reduction curves (two-generator surfaces)


def _primitive_kernel_vector(k: np.ndarray):
    """Primitive integer kernel vector of a singular 2x2 matrix."""
    for row in k:
        a, b = int(row[0]), int(row[1])
        if a or b:
            v = (-b, a)
            g = math.gcd(abs(v[0]), abs(v[1]))
            v = (v[0] // g, v[1] // g)
            if v[0] < 0 or (v[0] == 0 and v[1] < 0):
                v = (-v[0], -v[1])
            return v
    return None


def _suggested_candidates(surface, mc, max_period: int):
    """Curves fixed by a power of the homology action.

    On a two-generator surface a parabolic-type power H^k with an
    eigenvector +-v determines the only slope a periodic curve class can
    have; the cutting-sequence word of that slope is handed to the
    reduction search as an extra candidate.  Elliptic powers (H^k = +-I)
    fix every slope and suggest nothing beyond the catalog.
    """
    if len(surface.letters) != 2:
        return []
    h = mc.homology_matrix().astype(np.int64)
    eye = np.eye(2, dtype=np.int64)
    out, seen = [], set()
    m = h.copy()
    for _ in range(max_period):
        if np.array_equal(m, eye) or np.array_equal(m, -eye):
            break
        for sign in (1, -1):
            k = m - sign * eye
            if int(round(np.linalg.det(k.astype(float)))) != 0:
                continue
            v = _primitive_kernel_vector(k)
            if v is None or v in seen:
                continue
            seen.add(v)
            out.append(CurveClass.from_word(surface, torus_slope_word(*v)))
        m = m @ h
    return out


# ---------------------------------------------------------------------------
# component split


@dataclass
class _Region:
    genus: int
    boundary: int
    cusps: int
    members: list  # catalog classes living in this piece
    rim: list  # cut-curve words on its rim, with multiplicity


def _crossing_groups(curves):
    """Connected components of the crossing graph on a curve list."""
    n = len(curves)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if geometric_intersection(curves[i], curves[j]) != 0:
                pi, pj = find(i), find(j)
                if pi != pj:
                    parent[pi] = pj
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(curves[i])
    return list(groups.values())


def _homology_rank(surface, curves) -> int:
    if not curves:
        return 0
    vectors = [exponent_sums(c.word, surface.letters) for c in curves]
    return int(np.linalg.matrix_rank(np.array(vectors, dtype=float)))


def component_split(surface, gamma, max_word_length: int = 6):
    """Cut the surface along Gamma and return the complementary pieces.

    Signature arithmetic: a nonseparating cut turns (g, b, c) into
    (g-1, b+2, c); a separating cut (null-homologous curve) splits the
    piece in two, the genus dividing according to the homology rank of
    the catalog curves living on each side.  Null-homologous members are
    cut first so that later nonseparating cuts happen inside a known
    piece (located through catalog curves that cross the cut curve).
    The piece areas must add up to the ambient area; anything the
    arithmetic cannot resolve within the catalog raises rather than
    guessing.
    """
    gamma = sorted(gamma, key=CurveClass.sort_key)
    if not gamma:
        sig = surface.signature
        catalog = enumerate_simple_closed_geodesics(surface, max_word_length)
        return [_Region(sig.genus, sig.boundary, sig.cusps, list(catalog), [])]
    catalog = enumerate_simple_closed_geodesics(surface, max_word_length)
    gamma_words = {c.word for c in gamma}
    pool = [c for c in catalog
            if c.word not in gamma_words
            and all(geometric_intersection(c, g) == 0 for g in gamma)]
    sig = surface.signature
    regions = [_Region(sig.genus, sig.boundary, sig.cusps, pool, [])]

    def vec(c):
        return np.array(exponent_sums(c.word, surface.letters), dtype=int)

    separating = [g for g in gamma if not vec(g).any()]
    nonseparating = [g for g in gamma if vec(g).any()]

    for g in separating:
        region = _locate_region(surface, regions, g, gamma)
        if region.boundary or region.cusps:
            raise RuntimeError(
                "separating cut in a piece with existing boundary or cusps "
                "is outside the supported catalog budget")
        groups = _crossing_groups(region.members)
        if len(groups) > 2:
            raise RuntimeError(
                f"separating cut along {g.word!r}: expected two sides, "
                f"found {len(groups)} curve groups in the catalog")
        while len(groups) < 2:
            groups.append([])  # side whose curves all meet other cuts
        regions.remove(region)
        genus_total = region.genus
        sides = []
        for grp in groups:
            rank = _homology_rank(surface, grp)
            if rank % 2:
                raise RuntimeError(
                    f"side of {g.word!r} has odd homology rank {rank}")
            sides.append(rank // 2)
        if groups[1]:
            if sum(sides) != genus_total:
                raise RuntimeError(
                    f"genus split {sides} does not add up to {genus_total}")
        else:
            sides[1] = genus_total - sides[0]
            if sides[1] < 0:
                raise RuntimeError(
                    f"side of {g.word!r} would have negative genus")
        for grp, genus_side in zip(groups, sides):
            regions.append(_Region(genus_side, 1, 0, grp, [g.word]))

    for g in nonseparating:
        region = _locate_region(surface, regions, g, gamma)
        if region.genus < 1:
            raise RuntimeError(
                f"nonseparating cut along {g.word!r} in a genus-0 piece")
        region.genus -= 1
        region.boundary += 2
        region.rim.extend([g.word, g.word])

    area_total = sum(_region_area(r) for r in regions)
    ambient = 2.0 * math.pi * (2 * sig.genus - 2 + sig.boundary + sig.cusps)
    if abs(area_total - ambient) > 1e-9:
        raise RuntimeError(
            f"component areas {area_total:.6f} do not add up to the "
            f"ambient area {ambient:.6f}")
    for r in regions:
        if _region_area(r) < math.pi:
            raise RuntimeError(f"degenerate piece {r}")
    regions.sort(key=lambda r: (-_region_area(r), sorted(r.rim),
                                [c.word for c in r.members[:1]]))
    return regions


def _region_area(r: _Region) -> float:
    return 2.0 * math.pi * (2 * r.genus - 2 + r.boundary + r.cusps)


def _locate_region(surface, regions, g, gamma):
    """Find the piece a cut curve lives in.

    Catalog curves crossing g but disjoint from the rest of Gamma lie in
    the same piece as g; matching them against region members locates
    it.  With a single region there is nothing to decide.
    """
    if len(regions) == 1:
        return regions[0]
    others = [c for c in gamma if c.word != g.word]
    catalog = enumerate_simple_closed_geodesics(surface, 4)
    witnesses = [c for c in catalog
                 if geometric_intersection(c, g) != 0
                 and all(geometric_intersection(c, o) == 0 for o in others)]
    member_words = [{m.word for m in r.members} for r in regions]
    for w in witnesses:
        for r, words in zip(regions, member_words):
            if w.word in words:
                return r
            if any(geometric_intersection(w, m) != 0 for m in r.members):
                return r
    # the witnesses touch no catalogued piece, so the cut curve lives in
    # a bare one; only an unambiguous positive-genus bare piece qualifies
    bare = [r for r in regions if not r.members and r.genus >= 1]
    if len(bare) == 1:
        return bare[0]
    raise RuntimeError(f"could not locate the piece containing {g.word!r}")


def _region_of_curve(curve, regions):
    """Index of the piece a Gamma-disjoint curve lives in."""
    for j, r in enumerate(regions):
        if any(curve.word == m.word for m in r.members):
            return j
    for j, r in enumerate(regions):
        if any(geometric_intersection(curve, m) != 0 for m in r.members):
            return j
    return None


def _component_return_times(surface, mc, regions):
    """Orbit lengths of the pieces under the induced permutation.

    Pieces with catalog curves are tracked through the image of a
    member (it stays disjoint from Gamma, so it crosses curves of
    exactly one piece); bare pieces are matched by the image of their
    rim multiset.
    """
    if len(regions) == 1:
        return [1]
    perm = []
    for i, r in enumerate(regions):
        j = None
        if r.members:
            j = _region_of_curve(mc.push_forward(r.members[0]), regions)
        else:
            imaged = sorted(
                mc.push_forward(CurveClass.from_word(surface, w)).word
                for w in r.rim)
            matches = [k for k, r2 in enumerate(regions)
                       if not r2.members and sorted(r2.rim) == imaged]
            if len(matches) == 1:
                j = matches[0]
        if j is None:
            raise RuntimeError(
                f"could not track piece {i} through the map")
        perm.append(j)
    if sorted(perm) != list(range(len(regions))):
        raise RuntimeError("the map does not permute the pieces")
    times = []
    for i in range(len(regions)):
        j, t = perm[i], 1
        while j != i:
            j, t = perm[j], t + 1
        times.append(t)
    return times


# ---------------------------------------------------------------------------
# growth certificate (screen profile)


def _fit_residual(x, y):
    coeffs = np.polyfit(x, y, 1)
    return float(np.sum((np.polyval(coeffs, x) - y) ** 2)), float(coeffs[0])


def _growth_certificate(surface, mc, word: str, budgets: Budgets):
    """Exponential-vs-polynomial test on canonical word lengths.

    Combinatorial geodesic length is comparable to hyperbolic length,
    which grows like dilatation^n on aperiodic orbits, so an exponential
    fit beating the polynomial one certifies exponential stretching
    without computing intersection numbers.
    """
    calc = surface.words
    lengths = [len(calc.normal_form(word))]
    image_len = {}
    for g, w in mc.images.items():
        image_len[g] = len(w)
        image_len[g.upper()] = len(w)
    cur = word
    for _ in range(budgets.depth):
        bound = sum(image_len[ch] for ch in cur)
        if bound > budgets.max_letters and len(lengths) > 1:
            break
        cur = mc.apply(cur)
        lengths.append(len(calc.normal_form(cur)))
        if lengths[-1] > budgets.max_letters:
            break
    positive = [(n, l) for n, l in enumerate(lengths) if l > 0]
    if len(positive) < 4:
        return False, 0.0, lengths
    # drop the conjugation transient: fit on the tail half only
    tail = positive[-max(4, (len(positive) + 1) // 2):]
    ns = np.array([n for n, _ in tail], dtype=float)
    ls = np.log([l for _, l in tail])
    exp_res, exp_slope = _fit_residual(ns, ls)
    poly_res, _ = _fit_residual(np.log(ns + 1.0), ls)
    exponential = exp_res < poly_res and exp_slope > 0.05
    return exponential, float(math.exp(exp_slope)), lengths


# ---------------------------------------------------------------------------
# the classifier


def classify(surface, mc, budgets: Budgets | None = None) -> Verdict:
    """Decide Periodic / Reducible / PseudoAnosov within the budget.

    Indeterminate is returned only when the budget runs out with
    conflicting evidence; the evidence list then records exactly which
    checks disagreed.
    """
    budgets = budgets or Budgets()
    return _classify(surface, mc, budgets, depth=0)


def _classify(surface, mc, budgets: Budgets, depth: int) -> Verdict:
    evidence = []
    used = budgets.as_dict()
    extra = _suggested_candidates(surface, mc, budgets.max_period)
    if extra:
        evidence.append(
            "homology suggests slope candidates: "
            + ", ".join(c.word for c in extra))
    red = reduction_system(surface, mc, budgets.max_word_length,
                           budgets.max_period, extra_candidates=extra)
    meta = red.metadata
    evidence.append(
        f"reduction search: {meta['candidates']} candidates, "
        f"{meta['screened_by_homology']} screened by homology, "
        f"{meta['aperiodic_or_capped']} aperiodic in budget")

    if red.gamma:
        return _reducible_verdict(surface, mc, budgets, red, evidence,
                                  used, depth)

    catalog = enumerate_simple_closed_geodesics(surface, budgets.max_word_length)
    periodic_words = {c.word for c in red.gamma_prime}
    aperiodic = [c for c in catalog if c.word not in periodic_words]

    if not aperiodic:
        evidence.append(
            f"all {len(catalog)} enumerated seeds have closed orbits")
        return _periodic_verdict(surface, mc, budgets, evidence, used)

    evidence.append(
        f"seed {aperiodic[0].word!r} escapes the period budget "
        f"({len(aperiodic)} aperiodic seeds)")
    return _pseudo_anosov_verdict(surface, mc, budgets, aperiodic[0],
                                  evidence, used, depth)


def _periodic_verdict(surface, mc, budgets, evidence, used) -> Verdict:
    fs = default_filling_system(surface, budgets.max_word_length)
    if fs is None:
        evidence.append("no certified filling system within the catalog; "
                        "periodic evidence cannot be completed")
        return Verdict(INDETERMINATE, evidence=evidence, budgets_used=used)
    evidence.append(
        "filling system Sigma={%s} Sigma'={%s}: %d crossings, "
        "%d disk faces, graph connected, homology rank %d" % (
            ",".join(c.word for c in fs.sigma),
            ",".join(c.word for c in fs.sigma_prime),
            fs.info["crossings"], fs.info["disk_faces"],
            fs.info["homology_rank"]))
    n = periodic_order(surface, mc, fs, budgets.max_n)
    if n is None:
        evidence.append(
            f"no power up to {budgets.max_n} fixes the filling system "
            "even though every seed orbit closed: conflicting evidence")
        return Verdict(INDETERMINATE, evidence=evidence, budgets_used=used)
    evidence.append(
        f"power {n} fixes every filling-system member with orientation "
        "(sides preserved); a homeomorphism fixing a filling system is "
        "isotopic to the identity, so the order is exactly %d" % n)
    return Verdict(PERIODIC, order=n, evidence=evidence, budgets_used=used)


def _reducible_verdict(surface, mc, budgets, red, evidence, used,
                       depth) -> Verdict:
    gamma = tuple(red.gamma)
    evidence.append(
        "invariant system Gamma = {%s}: pairwise disjoint, isolated "
        "periodic classes, permuted by the map" % ",".join(
            c.word for c in gamma))
    regions = component_split(surface, gamma, budgets.max_word_length)
    times = _component_return_times(surface, mc, regions)
    reports = []
    for region, n_s in zip(regions, times):
        sub = _component_verdict(surface, mc, budgets, region, n_s,
                                 depth + 1)
        reports.append(ComponentReport(
            signature=(region.genus, region.boundary, region.cusps),
            area=_region_area(region),
            n_s=n_s,
            boundary=tuple(sorted(region.rim)),
            curves=tuple(c.word for c in region.members),
            sub_verdict=sub,
        ))
    evidence.append(
        "component areas %s sum to the ambient area" % (
            "+".join(f"{_region_area(r) / math.pi:g}*pi" for r in regions)))
    return Verdict(REDUCIBLE, gamma=gamma, components=tuple(reports),
                   evidence=evidence, budgets_used=used)


def _component_verdict(surface, mc, budgets, region: _Region, n_s: int,
                       depth: int) -> Verdict:
    used = budgets.as_dict()
    if depth >= budgets.recursion_cap:
        return Verdict(INDETERMINATE,
                       evidence=[f"recursion cap {budgets.recursion_cap} "
                                 "reached"],
                       budgets_used=used)
    mcn = mc.power(n_s) if n_s > 1 else mc
    calc = surface.words
    if not region.members:
        # planar piece (or one with no catalog curves): the mapping class
        # group data is finite, read off boundary and cusp rotation
        order = 1
        evidence = ["no essential catalog curves in the piece: finite "
                    "mapping-class data certified on its rim"]
        for w in sorted(set(region.rim)):
            base = calc.normal_form(w)
            cur, k = w, None
            for n in range(1, budgets.max_n + 1):
                cur = mcn.apply(cur)
                if calc.normal_form(cur) == base:
                    k = n
                    break
            if k is None:
                return Verdict(
                    INDETERMINATE,
                    evidence=evidence + [
                        f"rim curve {w!r} not fixed by any power up to "
                        f"{budgets.max_n}"],
                    budgets_used=used)
            order = order * k // math.gcd(order, k)
        evidence.append(f"rim curves fixed with orientation by power {order}")
        return Verdict(PERIODIC, order=order, evidence=evidence,
                       budgets_used=used)

    # piece with essential curves: rerun the trichotomy on its members
    periodic_members, aperiodic_members = [], []
    length_cap = max(300, 50 * budgets.max_word_length)
    for m in region.members:
        cur, closed = m, False
        for _ in range(budgets.max_period):
            cur = mcn.push_forward(cur)
            if cur == m:
                closed = True
                break
            if len(cur.word) > length_cap:
                break
        (periodic_members if closed else aperiodic_members).append(m)

    if aperiodic_members:
        seed = aperiodic_members[0]
        evidence = [f"component seed {seed.word!r} escapes the period "
                    "budget under the first-return map"]
        return _pseudo_anosov_verdict(surface, mcn, budgets, seed,
                                      evidence, used, depth,
                                      rim=tuple(region.rim))

    isolated = [c for c in periodic_members
                if all(geometric_intersection(c, d) == 0
                       for d in periodic_members if d is not c)]
    if isolated:
        return Verdict(
            REDUCIBLE, gamma=tuple(isolated),
            evidence=["nested invariant system inside the piece; split "
                      "not expanded at this depth"],
            budgets_used=used)

    order = 1
    base = [calc.normal_form(c.word) for c in region.members]
    cur = [c.word for c in region.members]
    found = None
    for n in range(1, budgets.max_n + 1):
        cur = [mcn.apply(w) for w in cur]
        if all(calc.normal_form(w) == b for w, b in zip(cur, base)):
            found = n
            break
    if found is None:
        return Verdict(
            INDETERMINATE,
            evidence=["component members all have closed orbits but no "
                      f"power up to {budgets.max_n} fixes them jointly"],
            budgets_used=used)
    return Verdict(
        PERIODIC, order=found,
        evidence=[f"power {found} fixes every catalog curve of the piece "
                  "with orientation (order certified on the component "
                  "catalog; no filling certificate at this depth)"],
        budgets_used=used)


def _pseudo_anosov_verdict(surface, mc, budgets, seed, evidence, used,
                           depth, rim=()) -> Verdict:
    if budgets.screen:
        exponential, rate, lengths = _growth_certificate(
            surface, mc, seed.word, budgets)
        if exponential:
            evidence.append(
                f"canonical length of the seed grows exponentially "
                f"(rate ~ {rate:.4g} over {len(lengths) - 1} stages)")
            evidence.append(
                "screen profile: laminations, census and dilatation "
                "table skipped; verdict kind only")
            return Verdict(PSEUDO_ANOSOV, evidence=evidence,
                           budgets_used=used)
        evidence.append(
            f"seed escapes the period budget but its growth is not "
            f"exponential over {len(lengths) - 1} stages: conflicting "
            "evidence")
        return Verdict(INDETERMINATE, evidence=evidence, budgets_used=used)

    rec = orbit(mc, seed, budgets.depth, with_intersections=True,
                max_letters=budgets.max_letters)
    if rec.period is not None:
        evidence.append(
            f"deep orbit of {seed.word!r} closes at {rec.period} beyond "
            "the period budget: conflicting evidence")
        return Verdict(INDETERMINATE, evidence=evidence, budgets_used=used)
    try:
        dil = dilatation_estimate(rec)
    except ValueError as exc:
        evidence.append(f"dilatation table unusable: {exc}")
        return Verdict(INDETERMINATE, evidence=evidence, budgets_used=used)
    if not dil.exponential:
        evidence.append(
            "intersection numbers grow polynomially, yet no invariant "
            "system was found: conflicting evidence")
        return Verdict(INDETERMINATE, evidence=evidence, budgets_used=used)
    evidence.append(
        f"intersection numbers grow exponentially; dilatation "
        f"{dil.value:.9g} (spread {dil.error_bar:.2g}) over "
        f"{len(rec.images) - 1} iterates")

    census = None
    projected = len(seed.word) * (dil.value ** budgets.min_depth)
    if projected > budgets.max_letters:
        evidence.append(
            "lamination stage skipped: projected image length "
            f"{projected:.3g} letters exceeds the budget; verdict rests "
            "on the reduction search and the growth certificate")
    else:
        try:
            lam_plus = lamination_approx(
                surface, mc, seed, "+", depth=budgets.depth,
                min_depth=budgets.min_depth)
            lam_minus = lamination_approx(
                surface, mc, seed, "-", depth=budgets.depth,
                min_depth=budgets.min_depth)
        except ValueError as exc:
            evidence.append(f"lamination stage failed: {exc}")
            return Verdict(INDETERMINATE, evidence=evidence,
                           budgets_used=used)
        if not (lam_plus.converged and lam_minus.converged):
            evidence.append(
                "laminations did not converge at depth "
                f"{budgets.depth} (residuals {lam_plus.hausdorff_residual:.3g}"
                f", {lam_minus.hausdorff_residual:.3g}): "
                "conflicting evidence")
            return Verdict(INDETERMINATE, evidence=evidence,
                           budgets_used=used)
        gamma_rim = tuple(CurveClass.from_word(surface, w)
                          for w in sorted(set(rim)))
        report = transversality_and_census(surface, lam_plus, lam_minus,
                                           gamma=gamma_rim)
        if not report.transverse:
            evidence.append("limit laminations are not transverse: "
                            "conflicting evidence")
            return Verdict(INDETERMINATE, evidence=evidence,
                           budgets_used=used)
        census = report.census.type_multiset()
        evidence.append(
            "laminations converged (residuals %.3g, %.3g), transverse; "
            "census %s" % (
                lam_plus.hausdorff_residual, lam_minus.hausdorff_residual,
                " / ".join(f"{t} x{n}" for t, n in census) or "empty"))
        if budgets.boundary_check and surface.cusp_words and not rim:
            evidence.append(_boundary_spot_check(surface, mc))

    return Verdict(PSEUDO_ANOSOV, dilatation=dil.value, census=census,
                   evidence=evidence, budgets_used=used)


def _boundary_spot_check(surface, mc) -> str:
    """One-line summary of the boundary-circle fixed-point structure."""
    try:
        anchor = anchor_at_cusp(mc, power=1, cusp_index=0)
        report = boundary_fixed_points(mc, power=1, anchor=anchor)
    except (ValueError, RuntimeError) as exc:
        return f"boundary spot check skipped ({exc})"
    kinds = [p.kind for p in report.fixed_points]
    n_con = kinds.count("contracting")
    n_exp = kinds.count("expanding")
    if report.alternating and n_con and n_con == n_exp:
        return ("boundary spot check: %d contracting / %d expanding "
                "fixed points alternate around the circle" % (n_con, n_exp))
    return ("boundary spot check inconclusive: %d contracting, "
            "%d expanding, alternating=%s" % (n_con, n_exp,
                                              report.alternating))
