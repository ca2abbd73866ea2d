"""Finite permutation groups and exhaustive invariable-generation checks.

Points are ``0..n-1``.  Composition convention, fixed once for the whole
package: ``(g * h)(x) == g(h(x))`` -- the right-hand factor acts first.
Conjugation follows the exponent notation ``x ** c`` meaning ``c^-1 x c``
(see :func:`conj`), so ``H^g = g^-1 H g``.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .config import budget
from .errors import (
    CapExceeded,
    DomainTooSmall,
    InvgenError,
    NotASubgroup,
    NotTransitive,
    SearchBudgetExceeded,
    SupplyNotComplete,
)


class Perm(tuple):
    """A permutation stored as its image tuple: ``p[i]`` is the image of ``i``."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        p = super().__new__(cls, images)
        if sorted(p) != list(range(len(p))):
            raise ValueError(f"not a permutation: {tuple(p)}")
        return p

    @classmethod
    def _raw(cls, images) -> Perm:
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls._raw(range(n))

    @classmethod
    def cycle(cls, n: int, *points: int) -> Perm:
        img = list(range(n))
        for a, b in zip(points, points[1:] + points[:1]):
            img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self)

    def __call__(self, x: int) -> int:
        return self[x]

    def __mul__(self, other: Perm) -> Perm:
        if not isinstance(other, Perm):
            return NotImplemented
        return Perm._raw([self[i] for i in other])

    def __rmul__(self, other):
        return NotImplemented

    def __pow__(self, k: int) -> Perm:
        base = self if k >= 0 else self.inverse()
        out = Perm.identity(len(self))
        for _ in range(abs(k)):
            out = out * base
        return out

    def inverse(self) -> Perm:
        inv = [0] * len(self)
        for i, j in enumerate(self):
            inv[j] = i
        return Perm._raw(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self) if i == j]

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = set()
        out = []
        for i in range(len(self)):
            if i in seen or self[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self[j]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths including fixed points, sorted descending."""
        lengths = [len(c) for c in self.cycles()]
        lengths += [1] * (len(self) - sum(lengths))
        return tuple(sorted(lengths, reverse=True))

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def __str__(self) -> str:
        return format_perm(self)

    def __repr__(self) -> str:
        return f"Perm({format_perm(self)!r}, n={len(self)})"


def conj(x: Perm, c: Perm) -> Perm:
    """``x^c = c^-1 x c``."""
    return c.inverse() * x * c


def format_perm(p: Perm) -> str:
    cyc = p.cycles()
    if not cyc:
        return "id"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, degree: int | None = None) -> Perm:
    """Parse cycle notation such as ``"(0 1)(2 3)"`` or ``"id"``.

    Cycles are multiplied left to right under the package convention, so
    ``"(0 1)(1 2)"`` means ``(0 1) * (1 2)``.
    """
    s = text.strip()
    if s in ("id", "()", ""):
        if degree is None:
            raise ValueError("degree required to parse the identity")
        return Perm.identity(degree)
    cycles = []
    rest = _CYCLE_RE.sub("", s).strip()
    if rest:
        raise ValueError(f"cannot parse permutation {text!r}")
    for m in _CYCLE_RE.finditer(s):
        body = m.group(1).replace(",", " ").split()
        pts = [int(t) for t in body]
        if len(set(pts)) != len(pts):
            raise ValueError(f"repeated point in cycle {m.group(0)!r}")
        cycles.append(pts)
    top = max((max(c) for c in cycles if c), default=-1) + 1
    n = top if degree is None else degree
    if n < top:
        raise ValueError(f"point {top - 1} out of range for degree {n}")
    out = Perm.identity(n)
    for c in cycles:
        if c:
            out = out * Perm.cycle(n, *c)
    return out


@dataclass(frozen=True)
class FiniteGroup:
    degree: int
    elements: frozenset
    generators: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def sorted_elements(self) -> list[Perm]:
        return sorted(self.elements)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for a in gens for b in gens)


@dataclass(frozen=True)
class ConjClassPartition:
    classes: tuple  # of frozenset[Perm]; classes[0] is {identity}
    class_of: dict

    def __len__(self) -> int:
        return len(self.classes)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


@dataclass(frozen=True)
class GroupAction:
    """A left action ``act(g, x)`` of a finite group on ``range(domain_size)``."""

    group: FiniteGroup
    domain_size: int
    act: Callable[[Perm, int], int]

    def orbit(self, x: int) -> set[int]:
        seen = {x}
        todo = [x]
        while todo:
            y = todo.pop()
            for g in self.group.generators:
                z = self.act(g, y)
                if z not in seen:
                    seen.add(z)
                    todo.append(z)
        return seen

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.domain_size


# ---------------------------------------------------------------------------
# closure and classes


def _closure_from(base: set, gens: Sequence[Perm], cap: int) -> set:
    elems = set(base)
    queue = deque(elems)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g
            if y not in elems:
                elems.add(y)
                if len(elems) > cap:
                    raise CapExceeded(f"closure exceeds cap {cap}", cap=cap)
                queue.append(y)
    return elems


def group_closure(generators: Sequence[Perm], cap: int | None = None, degree: int | None = None) -> FiniteGroup:
    """Breadth-first closure of ``generators`` under composition."""
    gens = tuple(generators)
    degrees = {len(g) for g in gens}
    if degree is not None:
        degrees.add(degree)
    if len(degrees) != 1:
        raise ValueError("generators must share one degree (pass degree= for an empty list)")
    n = degrees.pop()
    cap = budget().group_elements if cap is None else cap
    if cap < 1:
        raise ValueError("cap must be >= 1")
    elems = _closure_from({Perm.identity(n)}, gens, cap)
    return FiniteGroup(n, frozenset(elems), gens)


def subgroup(G: FiniteGroup, generators: Sequence[Perm]) -> FiniteGroup:
    """``<generators>`` as a group, checking membership in ``G``."""
    for h in generators:
        if len(h) != G.degree or h not in G:
            raise NotASubgroup(f"{h} is not an element of the group", element=str(h))
    return group_closure(generators, cap=max(G.order, 1), degree=G.degree)


def conjugacy_classes(G: FiniteGroup) -> ConjClassPartition:
    """Orbits of the conjugation action, identity first, then by first element."""
    class_of: dict = {}
    classes = []
    gens = [g for g in G.generators if not g.is_identity()]
    for x in G.sorted_elements():
        if x in class_of:
            continue
        orbit = {x}
        todo = [x]
        while todo:
            y = todo.pop()
            for g in gens:
                z = conj(y, g)
                if z not in orbit:
                    orbit.add(z)
                    todo.append(z)
        idx = len(classes)
        classes.append(frozenset(orbit))
        for z in orbit:
            class_of[z] = idx
    return ConjClassPartition(tuple(classes), class_of)


def is_conjugation_complete(G: FiniteGroup, S: Iterable[Perm], classes: ConjClassPartition | None = None) -> bool:
    cc = classes or conjugacy_classes(G)
    hit = {cc.class_of[s] for s in S}
    return all(i in hit for i in range(1, len(cc)))


def right_coset_reps(G: FiniteGroup, H: FiniteGroup) -> list[Perm]:
    """One representative ``g`` for each right coset ``H g``."""
    seen = set()
    reps = []
    for g in G.sorted_elements():
        if g in seen:
            continue
        reps.append(g)
        seen.update(h * g for h in H.elements)
    return reps


def conjugate_union(G: FiniteGroup, H: FiniteGroup) -> set:
    """``union over g of g^-1 H g``; ``H^g`` depends only on the coset ``Hg``."""
    out = set()
    for g in right_coset_reps(G, H):
        gi = g.inverse()
        out.update(gi * h * g for h in H.elements)
    return out


def is_wiegold(G: FiniteGroup, H_generators: Sequence[Perm]) -> bool:
    """Is ``<H_generators>`` a proper subgroup whose conjugates cover ``G``?

    Always false for finite groups (counting argument); computed honestly.
    """
    H = subgroup(G, H_generators)
    if H.order == G.order:
        return False
    return len(conjugate_union(G, H)) == G.order


# ---------------------------------------------------------------------------
# actions and Jordan


def natural_action(G: FiniteGroup) -> GroupAction:
    return GroupAction(G, G.degree, lambda g, x: g[x])


def coset_action(G: FiniteGroup, H: FiniteGroup) -> GroupAction:
    """Left multiplication on the left cosets ``xH``."""
    index: dict = {}
    reps = []
    for x in G.sorted_elements():
        if x in index:
            continue
        k = len(reps)
        reps.append(x)
        for h in H.elements:
            index[x * h] = k
    return GroupAction(G, len(reps), lambda g, i: index[g * reps[i]])


def jordan_active_element(A: GroupAction) -> Perm | None:
    """A fixed-point-free element of a transitive action on at least 2 points."""
    if A.domain_size < 2:
        raise DomainTooSmall("action domain must have at least 2 points", size=A.domain_size)
    if not A.is_transitive():
        raise NotTransitive("action is not transitive")
    points = range(A.domain_size)
    for g in A.group.sorted_elements():
        if all(A.act(g, x) != x for x in points):
            return g
    return None


# ---------------------------------------------------------------------------
# invariable generation


def invariably_generates(G: FiniteGroup, S: Sequence[Perm], max_leaves: int | None = None) -> bool:
    """Do ``{s^g(s)}`` generate ``G`` for every choice of conjugators?

    Depth-first over choices of one conjugate per element of ``S``.  A branch
    whose partial closure is already ``G`` is accepted without descending.
    The first choice is pinned to ``S[0]`` itself: conjugating a whole tuple
    by one element does not change whether it generates.
    """
    S = list(S)
    if not S:
        raise ValueError("S must be non-empty")
    for s in S:
        if s not in G:
            raise NotASubgroup(f"{s} is not an element of the group", element=str(s))
    max_leaves = budget().search_leaves if max_leaves is None else max_leaves
    cc = conjugacy_classes(G)
    choices = [[S[0]]] + [sorted(cc.classes[cc.class_of[s]]) for s in S[1:]]
    full = G.order
    ident = G.identity
    leaves = 0

    def dfs(i: int, elems: set, gens: list) -> bool:
        nonlocal leaves
        if len(elems) == full or i == len(choices):
            leaves += 1
            if leaves > max_leaves:
                raise SearchBudgetExceeded("invariable generation search too large", leaves=leaves)
            return len(elems) == full
        for x in choices[i]:
            if x in elems:
                nxt, ngens = elems, gens
            else:
                ngens = gens + [x]
                nxt = _closure_from(elems, ngens, full)
            if not dfs(i + 1, nxt, ngens):
                return False
        return True

    return dfs(0, {ident}, [])


# ---------------------------------------------------------------------------
# word problems in S_d


def symmetric_elements(d: int) -> list[Perm]:
    """All of ``S_d`` in lexicographic order (identity first)."""
    return [Perm._raw(p) for p in itertools.permutations(range(d))]


def express_as_conjugate_product(d: int, target: Perm, supply: Sequence[Perm]) -> list[tuple[int, Perm]]:
    """Write ``target`` as ``prod supply[i_k] ** c_k`` (``x ** c = c^-1 x c``).

    Breadth-first over products of conjugates, deduplicated by the element
    reached, so the returned length is minimal.  ``supply`` must meet every
    nontrivial class of ``S_d``.
    """
    if len(target) != d or any(len(s) != d for s in supply):
        raise ValueError("degree mismatch")
    elems = symmetric_elements(d)
    types = {p.cycle_type() for p in elems} - {(1,) * d}
    have = {s.cycle_type() for s in supply}
    missing = types - have
    if missing:
        raise SupplyNotComplete(
            "supply misses conjugacy classes of S_d", missing=sorted(missing)
        )
    moves = []
    for i, s in enumerate(supply):
        seen = set()
        for c in elems:
            x = conj(s, c)
            if x not in seen:
                seen.add(x)
                moves.append((i, c, x))
    start = Perm.identity(d)
    parent = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == target:
            break
        for i, c, x in moves:
            nxt = cur * x
            if nxt not in parent:
                parent[nxt] = (cur, i, c)
                queue.append(nxt)
    if target not in parent:
        raise InvgenError("conjugate product search failed despite complete supply")
    out = []
    node = target
    while parent[node] is not None:
        prev, i, c = parent[node]
        out.append((i, c))
        node = prev
    return out[::-1]


def express_as_word(target: Perm, generators: Sequence[Perm]) -> list[int] | None:
    """Shortest positive word (generator indices) whose product is ``target``."""
    start = Perm.identity(len(target))
    parent = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == target:
            break
        for i, g in enumerate(generators):
            nxt = cur * g
            if nxt not in parent:
                parent[nxt] = (cur, i)
                queue.append(nxt)
    if target not in parent:
        return None
    word = []
    node = target
    while parent[node] is not None:
        node, i = parent[node]
        word.append(i)
    return word[::-1]


# ---------------------------------------------------------------------------
# standard groups and serialization


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return group_closure([], degree=1)
    return group_closure([Perm.cycle(n, 0, 1), Perm.cycle(n, *range(n))])


def alternating_group(n: int) -> FiniteGroup:
    if n < 3:
        return group_closure([], degree=n)
    gens = [Perm.cycle(n, i, i + 1, i + 2) for i in range(n - 2)]
    return group_closure(gens)


def cyclic_group(n: int) -> FiniteGroup:
    """Regular representation of ``Z/n``."""
    return group_closure([Perm.cycle(n, *range(n))] if n > 1 else [], degree=n)


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the ``n``-gon, order ``2n``, acting on its vertices."""
    rot = Perm.cycle(n, *range(n))
    ref = Perm([(-i) % n for i in range(n)])
    return group_closure([rot, ref])


def quaternion_group() -> FiniteGroup:
    """``Q8`` in its regular representation on 8 points.

    Points ``0..7`` stand for ``1, -1, i, -i, j, -j, k, -k``.
    """
    units = ["1", "i", "j", "k"]
    table = {
        ("1", u): (1, u) for u in units
    }
    table.update({(u, "1"): (1, u) for u in units})
    table.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })

    def idx(sign, u):
        return 2 * units.index(u) + (0 if sign == 1 else 1)

    def left(sign, u):
        img = [0] * 8
        for k, v in enumerate(units):
            for s in (1, -1):
                t, w = table[(u, v)]
                img[idx(s, v)] = idx(sign * s * t, w)
        return Perm(img)

    return group_closure([left(1, "i"), left(1, "j")])


_NAMED = re.compile(r"^([SADZQ])(\d+)$")


def named_group(name: str) -> FiniteGroup:
    """``S3``, ``A5``, ``D4`` (order 8), ``Z6``, ``Q8``..."""
    m = _NAMED.match(name.strip().upper())
    if not m:
        raise ValueError(f"unknown group name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "S":
        return symmetric_group(n)
    if kind == "A":
        return alternating_group(n)
    if kind == "D":
        return dihedral_group(n)
    if kind == "Z":
        return cyclic_group(n)
    if n != 8:
        raise ValueError("only Q8 is available")
    return quaternion_group()


def group_to_json(G: FiniteGroup) -> dict:
    return {"degree": G.degree, "generators": [format_perm(g) for g in G.generators]}


def group_from_json(doc: dict, cap: int | None = None) -> FiniteGroup:
    n = int(doc["degree"])
    gens = [parse_perm(s, n) for s in doc.get("generators", [])]
    return group_closure(gens, cap=cap, degree=n)
