"""Constructive generation: vertex transitivity from a translation and an odometer,
and approximation of stabilizer elements by products of type-(n, P) elements.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import DepthExhausted, InvgenError, SupplyIncomplete
from ..perm import Perm, SupplyNotComplete, express_as_conjugate_product, express_as_word
from ..words import Word, evaluate, reduce
from . import addresses as A
from .classify import phi_v1, phi_vnu
from .elements import Identity, TreeAut, all_type_specs, make_type_nP, tree_ops


@dataclass
class Construction:
    word: Word
    element: TreeAut
    steps: list

    def to_json(self):
        return {"word": str(self.word), "length": len(self.word), "steps": self.steps}


# word bookkeeping over generators x1 = h, x2 = s


def _w(*parts) -> list:
    out = []
    for p in parts:
        out.extend(p.letters if isinstance(p, Word) else p)
    return out


def _pow(var: int, k: int) -> list:
    return [(var, 1 if k > 0 else -1)] * abs(k)


def _orbit_power(g: TreeAut, start: str, accept, limit: int) -> int:
    """Least ``k >= 0`` with ``accept(g^k(start))``, scanning one orbit."""
    x = start
    for k in range(limit + 1):
        if accept(x):
            return k
        x = g.image(x)
        if x == start:
            break
    raise InvgenError("orbit scan found no admissible power", start=start)


def vertex_transitivity_witness(h: TreeAut, s: TreeAut, x: str, v: str | None = None) -> Construction:
    """Return ``g`` in ``<h, s>`` with ``g(v) = x``, following the induction on ``d(v, x)``.

    ``h`` is a translation of length 1 and ``s`` is ``v``-spherically
    transitive.  ``s'`` is obtained by conjugating ``s`` so that it fixes the
    neighbor ``u`` of ``v``; the induction alternates ``s'`` and ``s`` to push
    ``v`` outward two steps at a time, and a final power of ``s`` lands on ``x``.
    """
    d = s.d
    if v is None:
        v = _fixed_vertex(s)
    if s.image(v) != v:
        raise InvgenError("s must fix v", vertex=v)
    A.check_address(x, d)
    x0 = x
    H, S = 1, 2
    steps = []
    v1, v2 = h.image(v), h.image(h.image(v))
    s_h2 = h * h * s * h.inverse() * h.inverse()
    target = A.dist(v1, v2)
    u = next(w for w in A.neighbors(v, d) if A.dist(w, v2) == target)
    n = _orbit_power(s_h2, v1, lambda y: y == u, A.sphere_size(target, d))
    # c = (s^{h^2})^n * h maps v to u, so s' = c s c^-1 fixes u
    c = (s_h2 ** n) * h
    s_prime = c * s * c.inverse()
    c_word = _w(_pow(H, 2), _pow(S, n), _pow(H, -2), _pow(H, 1))
    steps.append({"u": u, "n": n})

    def s_prime_word(m):
        return _w(c_word, _pow(S, m), reduce(c_word).inverse())

    prefix: list = []
    pre_el: TreeAut = Identity(d)
    if A.dist(v, x) % 2 == 1:
        x = h.image(x)
        prefix = _pow(H, -1)
        pre_el = h.inverse()
        steps.append({"parity": "odd", "replaced_by": x})
    dx = A.dist(v, x)
    g: TreeAut = Identity(d)
    letters: list = []
    y = v
    for k_step in range(1, dx // 2 + 1):
        r_u = A.dist(u, y)
        m = _orbit_power(s_prime, y, lambda z: A.dist(z, u) < A.dist(z, v), A.sphere_size(r_u, d))
        y = (s_prime ** m).image(y) if m else y
        k = _orbit_power(s, y, lambda z: A.dist(z, v) < A.dist(z, u), A.sphere_size(A.dist(v, y), d))
        y = (s ** k).image(y) if k else y
        g = (s ** k) * (s_prime ** m) * g
        letters = _w(_pow(S, k), s_prime_word(m), letters)
        steps.append({"n": k_step, "m": m, "k": k, "vertex": y})
        if A.dist(v, y) != 2 * k_step:
            raise DepthExhausted("induction left the expected sphere", step=k_step)
    l_pow = _orbit_power(s, y, lambda z: z == x, A.sphere_size(dx, d)) if dx else 0
    g = pre_el * (s ** l_pow) * g
    letters = _w(prefix, _pow(S, l_pow), letters)
    steps.append({"l": l_pow})
    if g.image(v) != x0:
        raise InvgenError("construction missed its target", target=x0)
    return Construction(reduce(letters), g, steps)


def _fixed_vertex(s: TreeAut) -> str:
    for w in A.ball(A.ROOT, 4, s.d):
        if s.image(w) == w:
            return w
    raise InvgenError("no fixed vertex of s near v0")


def evaluate_hs(word: Word, h: TreeAut, s: TreeAut) -> TreeAut:
    return evaluate(word, [h, s], tree_ops(s.d))


# ---------------------------------------------------------------------------
# stabilizer approximation


def default_supply(d: int, n_max: int, v: str = A.ROOT) -> dict:
    """One canonical type-``(n, P)`` element about ``v`` for every admissible spec with ``n <= n_max``."""
    out = {}
    for n in range(1, n_max + 1):
        u = None if n == 1 else A.sphere(v, n - 1, d)[0]
        for spec in all_type_specs(d, n):
            out[spec] = make_type_nP(v, spec, u)
    return out


def _witness(g: TreeAut, v: str, n: int) -> str:
    for u in A.sphere(v, n - 1, g.d):
        if any(g.image(x) != x for x in A.neighbors(u, g.d)):
            return u
    raise SupplyIncomplete("supply element acts trivially on its sphere", n=n)


def _solve(target: Perm, gens: list, gen_words: list, perms: list[Perm], degree: int, level: int):
    """Lift a conjugate-product expression in ``S_degree`` to a product of supply elements."""
    try:
        expr = express_as_conjugate_product(degree, target, perms)
    except SupplyNotComplete as e:
        raise SupplyIncomplete(str(e), level=level, **e.details) from None
    out: TreeAut = Identity(gens[0].d)
    letters: list = []
    used = []
    for i, conj in expr:
        idx = express_as_word(conj, perms)
        if idx is None:
            raise SupplyIncomplete("supply images do not generate the needed conjugator", level=level)
        lift: TreeAut = Identity(gens[i].d)
        lift_letters: list = []
        for j in idx:
            lift = lift * gens[j]
            lift_letters += gen_words[j]
        out = out * lift.inverse() * gens[i] * lift
        letters += list(reduce(lift_letters).inverse().letters) + gen_words[i] + lift_letters
        used.append({"supply": i, "conjugator": idx})
    return out, letters, used


def stabilizer_approximation(k: TreeAut, supply: dict, n: int, s: TreeAut, v: str = A.ROOT) -> Construction:
    """Product of supply elements (and ``s``-conjugates) agreeing with ``k`` on ``B(v, n)``.

    Level 1 solves the color permutation of ``k`` at ``v`` in ``S_d``.  Level
    ``m`` corrects, one vertex ``u`` of ``S(v, m-1)`` at a time, the permutation
    of the outward colors at ``u`` in ``S_{d-1}`` using supply elements moved to
    witness ``u`` by powers of ``s``.  The word is over the supply elements in
    sorted spec order followed by ``s``.
    """
    d = k.d
    if k.image(v) != v:
        raise InvgenError("k must fix v", vertex=v)
    if s.image(v) != v:
        raise InvgenError("s must fix v", vertex=v)
    if k.depth < n:
        raise DepthExhausted("k is not known on B(v, n)", depth=k.depth, n=n)
    specs = sorted(supply, key=lambda t: (t.n, t.blocks))
    for m in range(1, n + 1):
        have = {t.shape() for t in specs if t.n == m}
        if have != {t.shape() for t in all_type_specs(d, m)}:
            raise SupplyIncomplete(f"type-({m}, P) supply misses partition shapes", level=m)
    var = {t: i + 1 for i, t in enumerate(specs)}
    S = len(specs) + 1
    steps = []
    letters: list = []
    level1 = [t for t in specs if t.n == 1]
    target = phi_v1(k, v)
    k_cur: TreeAut = Identity(d)
    used = []
    if not target.is_identity():
        gens = [supply[t] for t in level1]
        k_cur, letters, used = _solve(target, gens, [[(var[t], 1)] for t in level1],
                                      [phi_v1(g, v) for g in gens], d, 1)
    steps.append({"level": 1, "factors": used})
    for m in range(2, n + 1):
        delta = k_cur.inverse() * k
        level = [t for t in specs if t.n == m]
        witnesses = [_witness(supply[t], v, m) for t in level]
        level_steps = []
        for u in A.sphere(v, m - 1, d):
            tau = phi_vnu(delta, v, u)
            if tau.is_identity():
                continue
            moved, words = [], []
            for t, w in zip(level, witnesses):
                a = _orbit_power(s, w, lambda z: z == u, A.sphere_size(m - 1, d))
                sa = s ** a
                moved.append(sa * supply[t] * sa.inverse())
                words.append(_pow(S, a) + [(var[t], 1)] + _pow(S, -a))
            gj, gj_letters, used = _solve(tau, moved, words, [phi_vnu(g, v, u) for g in moved], d - 1, m)
            k_cur = k_cur * gj
            letters += gj_letters
            level_steps.append({"u": u, "factors": used})
        steps.append({"level": m, "vertices": level_steps})
    for w in A.ball(v, n, d):
        if k_cur.image(w) != k.image(w):
            raise InvgenError("approximation disagrees with k", vertex=w)
    return Construction(reduce(letters), k_cur, steps)
