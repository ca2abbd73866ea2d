"""Tits classification, orbital types, conjugacy tests and local actions."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DepthExhausted, NotInBallStabilizer, NotInStabilizer, WrongClass
from ..perm import Perm
from . import addresses as A
from .elements import INF, TreeAut

WORKING_RADIUS = 6


@dataclass(frozen=True)
class Elliptic:
    fixed_vertex: str
    kind = "elliptic"

    def to_json(self):
        return {"class": self.kind, "fixed_vertex": self.fixed_vertex}


@dataclass(frozen=True)
class Inversion:
    edge: tuple
    kind = "inversion"

    def to_json(self):
        return {"class": self.kind, "edge": list(self.edge)}


@dataclass(frozen=True)
class Hyperbolic:
    length: int
    axis: tuple
    kind = "hyperbolic"

    def to_json(self):
        return {"class": self.kind, "length": self.length, "axis": list(self.axis)}


@dataclass(frozen=True)
class Undetermined:
    reason: str
    kind = "undetermined"

    def to_json(self):
        return {"class": self.kind, "reason": self.reason}


def _radius(g: TreeAut, radius: int | None) -> int:
    r = WORKING_RADIUS if radius is None else radius
    return int(min(r, g.depth))


def displacement_profile(g: TreeAut, radius: int | None = None) -> dict[str, int]:
    R = _radius(g, radius)
    return {w: A.dist(w, g.image(w)) for w in A.ball(A.ROOT, R, g.d)}


def classify(g: TreeAut, radius: int | None = None):
    """Elliptic, inversion or hyperbolic, decided from the displacement profile on ``B(v0, R)``.

    A class is reported only when the ball certifies it: a fixed vertex, a
    flipped edge, or an argmin vertex ``a`` whose image stays in the ball
    (then the geodesic ``[a, g a]`` lies in the ball and on the axis).
    """
    R = _radius(g, radius)
    if R < 0:
        return Undetermined("no known ball")
    prof = displacement_profile(g, R)
    D = min(prof.values())
    M = [w for w, x in prof.items() if x == D]
    if D == 0:
        return Elliptic(M[0])
    a = next((w for w in M if len(g.image(w)) <= R), None)
    if a is None:
        return Undetermined(f"minimal displacement {D} attained only where images leave B(v0,{R})")
    ga = g.image(a)
    if D == 1 and g.image(ga) == a:
        return Inversion(tuple(sorted((a, ga), key=lambda w: (len(w), w))))

    def pos(m):
        da = A.dist(a, m)
        return da if A.dist(ga, m) < da + D else -da

    axis = sorted(M, key=pos)
    if any(A.dist(x, y) != 1 for x, y in zip(axis, axis[1:])):
        return Undetermined("minimal displacement set is not a geodesic")
    return Hyperbolic(D, tuple(axis))


def translation_length(g: TreeAut, radius: int | None = None):
    c = classify(g, radius)
    if isinstance(c, Hyperbolic):
        return c.length
    if isinstance(c, Elliptic):
        return 0
    return c if isinstance(c, Undetermined) else Undetermined("inversion has no translation length")


# ---------------------------------------------------------------------------
# orbital types


@dataclass(frozen=True)
class OrbitNode:
    mark: int
    exact: bool
    children: tuple = ()

    def key(self):
        return (self.mark, self.exact, tuple(sorted(c.key() for c in self.children)))

    def to_json(self):
        doc = {"mark": self.mark}
        if not self.exact:
            doc["lower_bound"] = True
        doc["children"] = [c.to_json() for c in sorted(self.children, key=lambda c: c.key())]
        return doc


@dataclass
class OrbitalType:
    """Marked quotient of a region by ``<g>``, rooted at the orbit of ``center``."""

    center: object
    radius: int
    root: OrbitNode
    orbits: list = field(default_factory=list)  # (representative, size, exact)

    def key(self):
        return self.root.key()

    def marks_by_level(self) -> list[list[int]]:
        out, level = [], [self.root]
        while level:
            out.append(sorted(n.mark for n in level))
            level = [c for n in level for c in n.children]
        return out

    def to_json(self):
        center = list(self.center) if isinstance(self.center, tuple) else self.center
        return {"center": center, "radius": self.radius, "tree": self.root.to_json()}


def _region(center, r: int, d: int) -> list[str]:
    if isinstance(center, tuple):
        a, b = center
        seen = dict.fromkeys(A.ball(a, r, d))
        seen.update(dict.fromkeys(A.ball(b, r, d)))
        return list(seen)
    return A.ball(center, r, d)


def _orbital_type(g: TreeAut, center, r: int) -> OrbitalType:
    region = _region(center, r, g.d)
    inside = set(region)
    parent = {w: w for w in region}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    closed = {}
    for w in region:
        gw = g.image(w)
        if gw in inside:
            parent[find(w)] = find(gw)
        else:
            closed[w] = False
    comps: dict[str, list[str]] = {}
    for w in region:
        comps.setdefault(find(w), []).append(w)
    exact = {root: all(closed.get(w, True) for w in ws) for root, ws in comps.items()}
    start = find(center[0] if isinstance(center, tuple) else center)
    children: dict[str, set] = {}
    seen = {start}
    order = [start]
    for comp in order:
        nxt = set()
        for w in comps[comp]:
            for x in A.neighbors(w, g.d):
                if x in inside:
                    c = find(x)
                    if c not in seen:
                        seen.add(c)
                        nxt.add(c)
        children[comp] = nxt
        order.extend(sorted(nxt))

    def build(comp):
        return OrbitNode(len(comps[comp]), exact[comp], tuple(build(c) for c in sorted(children[comp])))

    orbits = [(min(ws, key=lambda w: (len(w), w)), len(ws), exact[c]) for c, ws in comps.items()]
    return OrbitalType(center, r, build(start), sorted(orbits, key=lambda o: (len(o[0]), o[0])))


def orbital_type(g: TreeAut, r: int, center=A.ROOT) -> OrbitalType:
    """Orbits of ``<g>`` on ``B(center, r)`` with cardinality marks.

    ``center`` may be an edge ``(a, b)``, in which case the region is the union
    of the two balls.  Orbits that leave the region are flagged lower-bound.
    """
    cls = classify(g)
    if isinstance(cls, Hyperbolic):
        raise WrongClass("orbital types are trees only for elliptic elements and inversions",
                         length=cls.length)
    far = max(len(c) for c in center) if isinstance(center, tuple) else len(center)
    if g.depth != INF and far + r > g.depth:
        raise DepthExhausted("orbital type needs images beyond the known ball", depth=g.depth)
    return _orbital_type(g, center, r)


# ---------------------------------------------------------------------------
# conjugacy


@dataclass(frozen=True)
class ConjugacyResult:
    status: str  # "conjugate_up_to" | "not_conjugate" | "undetermined"
    radius: int
    exact: bool = False
    reason: str = ""

    def to_json(self):
        return {"status": self.status, "radius": self.radius, "exact": self.exact, "reason": self.reason}


def fixed_vertices(g: TreeAut, R: int) -> tuple[list[str], bool]:
    """Fixed vertices in ``B(v0, R)`` and whether that list is all of ``Fix(g)``.

    ``Fix(g)`` is a subtree, so if none of it reaches the boundary sphere the
    list is complete.
    """
    fix = [w for w in A.ball(A.ROOT, R, g.d) if g.image(w) == w]
    complete = bool(fix) and all(len(w) < R for w in fix)
    return fix, complete


def conjugacy_test(g: TreeAut, h: TreeAut, r: int, search_radius: int | None = None) -> ConjugacyResult:
    """Compare ``g`` and ``h`` up to radius ``r``.

    Hyperbolic pairs are decided by translation length.  Elliptic pairs are
    compared through rooted orbital types at fixed vertices; a match means the
    actions on the two ``r``-balls are conjugate.  ``not_conjugate`` is
    reported only when one side's fixed set has been enumerated completely.
    """
    cg, ch = classify(g), classify(h)
    if isinstance(cg, Undetermined) or isinstance(ch, Undetermined):
        return ConjugacyResult("undetermined", r, reason="classification undetermined")
    if cg.kind != ch.kind:
        return ConjugacyResult("not_conjugate", r, True, f"{cg.kind} vs {ch.kind}")
    if isinstance(cg, Hyperbolic):
        if cg.length == ch.length:
            return ConjugacyResult("conjugate_up_to", r, True, "equal translation length")
        return ConjugacyResult("not_conjugate", r, True, f"translation lengths {cg.length} and {ch.length}")
    if isinstance(cg, Inversion):
        try:
            same = _orbital_type(g, cg.edge, r).key() == _orbital_type(h, ch.edge, r).key()
        except DepthExhausted:
            return ConjugacyResult("undetermined", r, reason="flipped edge too close to the known boundary")
        if same:
            return ConjugacyResult("conjugate_up_to", r, reason="orbital types agree at the flipped edges")
        return ConjugacyResult("not_conjugate", r, True, "orbital types differ at the flipped edges")
    return _elliptic_test(g, h, cg.fixed_vertex, r, search_radius)


def _search_radius(g: TreeAut, r: int, search_radius: int | None) -> int:
    R = WORKING_RADIUS if search_radius is None else search_radius
    return int(min(R, g.depth - r))


def _elliptic_test(g, h, p, r, search_radius):
    Rg, Rh = _search_radius(g, r, search_radius), _search_radius(h, r, search_radius)
    if Rg < len(p) or Rh < 0:
        return ConjugacyResult("undetermined", r, reason="known depth too small for the requested radius")
    try:
        tg = _orbital_type(g, p, r).key()
        fix_h, complete_h = fixed_vertices(h, Rh)
        keys_h = {_orbital_type(h, q, r).key() for q in fix_h}
        if tg in keys_h:
            return ConjugacyResult("conjugate_up_to", r, reason="orbital types agree at fixed vertices")
        if complete_h:
            return ConjugacyResult("not_conjugate", r, True, "no fixed vertex of h carries the orbital type of g")
        fix_g, complete_g = fixed_vertices(g, Rg)
        if complete_g:
            keys_g = {_orbital_type(g, q, r).key() for q in fix_g}
            th = _orbital_type(h, fix_h[0], r).key()
            if th not in keys_g:
                return ConjugacyResult("not_conjugate", r, True, "no fixed vertex of g carries the orbital type of h")
    except DepthExhausted:
        return ConjugacyResult("undetermined", r, reason="fixed vertices too close to the known boundary")
    return ConjugacyResult("undetermined", r, reason="no matching fixed vertex found in the search region")


# ---------------------------------------------------------------------------
# local actions


def phi_v1(g: TreeAut, v: str = A.ROOT) -> Perm:
    """Permutation induced on the colors at ``v`` (points ``0..d-1``)."""
    if g.image(v) != v:
        raise NotInStabilizer(f"element does not fix {v!r}", vertex=v)
    return g.local_perm(v)


def phi_vnu(g: TreeAut, v: str, u: str) -> Perm:
    """Permutation of the ``d-1`` outward colors at ``u``, relabeled in increasing order."""
    n1 = A.dist(v, u)
    if n1 < 1:
        raise NotInBallStabilizer("u must differ from v")
    for w in A.ball(v, n1, g.d):
        if g.image(w) != w:
            raise NotInBallStabilizer(f"element moves {w!r} inside B(v,{n1})", vertex=w)
    inward = A.edge_color(u, A.geodesic(u, v)[1])
    out = [0] * (g.d - 1)
    for c in A.colors(g.d):
        if c == inward:
            continue
        c2 = A.edge_color(u, g.image(A.step(u, c)))
        out[A.psi(inward, c)] = A.psi(inward, c2)
    return Perm(out)


def sphere_orbit(g: TreeAut, w: str, limit: int) -> list[str]:
    orbit = [w]
    x = g.image(w)
    while x != w:
        orbit.append(x)
        if len(orbit) > limit:
            break
        x = g.image(x)
    return orbit


def verify_spherical_transitivity(s: TreeAut, v: str, r: int) -> bool:
    if s.image(v) != v:
        return False
    for n in range(1, r + 1):
        size = A.sphere_size(n, s.d)
        if len(sphere_orbit(s, A.sphere(v, n, s.d)[0], size)) != size:
            return False
    return True


# ---------------------------------------------------------------------------
# element families


def _fixed_in_region(g: TreeAut, R: int) -> list[str]:
    return [w for w in A.ball(A.ROOT, R, g.d) if g.image(w) == w]


def is_spherically_transitive(g: TreeAut, r: int = 3, R: int = 3) -> bool:
    """Some fixed vertex in ``B(v0, R)`` has single ``<g>``-orbits on its spheres up to ``r``."""
    return any(verify_spherical_transitivity(g, v, r) for v in _fixed_in_region(g, R))


def is_hyperbolic(g: TreeAut) -> bool:
    return isinstance(classify(g), Hyperbolic)


def type_about(g: TreeAut, v: str, n: int) -> tuple | None:
    """Orbit-size shape if ``g`` has type ``(n, P)`` about ``v`` (witness found by scan), else ``None``."""
    if g.image(v) != v:
        return None
    if n == 1:
        shape = tuple(sorted(phi_v1(g, v).cycle_type(), reverse=True))
        return shape if shape[0] > 1 else None
    if any(g.image(w) != w for w in A.ball(v, n - 1, g.d)):
        return None
    moved = [u for u in A.sphere(v, n - 1, g.d) if any(g.image(x) != x for x in A.neighbors(u, g.d))]
    if len(moved) != 1:
        return None
    return phi_vnu(g, v, moved[0]).cycle_type()


def in_type_family(g: TreeAut, n: int, R: int = 3) -> bool:
    return any(type_about(g, v, n) is not None for v in _fixed_in_region(g, R))


def families(g: TreeAut, n_max: int = 3, R: int = 3) -> dict:
    """Membership in the spherically transitive, hyperbolic and type-``n`` families, by scan."""
    out = {"Ts": is_spherically_transitive(g, R=R), "H": is_hyperbolic(g)}
    for n in range(1, n_max + 1):
        out[f"P{n}"] = in_type_family(g, n, R)
    return out
