"""Automorphisms of the d-regular tree.

Every element answers ``image(w)`` for vertex addresses ``w`` up to its known
``depth`` (``inf`` for exact recipes).  Composition follows the permutation
convention ``(g * h)(w) = g(h(w))``.  Images are memoized per element.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

from sympy.utilities.iterables import multiset_partitions

from ..errors import DepthExhausted, InvalidPartition, InvgenError
from ..perm import Perm
from ..words import GroupOps
from . import addresses as A

INF = math.inf


class TreeAut:
    d: int
    depth: float

    def __init__(self, d: int, depth: float = INF):
        self.d = d
        self.depth = depth
        self._cache: dict[str, str] = {}
        self._inverse: TreeAut | None = None

    def image(self, w: str) -> str:
        out = self._cache.get(w)
        if out is None:
            if len(w) > self.depth:
                raise DepthExhausted(f"vertex {w!r} lies outside the known ball of radius {self.depth}",
                                     vertex=w, depth=self.depth)
            out = self._cache[w] = self._image(w)
        return out

    __call__ = image

    def _image(self, w: str) -> str:
        raise NotImplementedError

    def _make_inverse(self) -> TreeAut:
        raise NotImplementedError

    def inverse(self) -> TreeAut:
        if self._inverse is None:
            self._inverse = self._make_inverse()
            self._inverse._inverse = self
        return self._inverse

    def displacement(self) -> int:
        return len(self.image(A.ROOT))

    def __mul__(self, other: TreeAut) -> TreeAut:
        if not isinstance(other, TreeAut):
            return NotImplemented
        if other.d != self.d:
            raise ValueError("valence mismatch")
        if isinstance(self, Identity):
            return other
        if isinstance(other, Identity):
            return self
        return Product(self, other)

    def __pow__(self, k: int) -> TreeAut:
        if k == 0:
            return Identity(self.d)
        if k < 0:
            return self.inverse() ** (-k)
        if k == 1:
            return self
        return Power(self, k)

    def fixes(self, w: str) -> bool:
        return self.image(w) == w

    def local_perm(self, w: str) -> Perm:
        """Colors at ``w`` to colors at ``g(w)``, on points ``0..d-1``."""
        gw = self.image(w)
        return Perm(int(A.edge_color(gw, self.image(A.step(w, c)))) - 1 for c in A.colors(self.d))

    def restrict(self, radius: int) -> Truncated:
        return Truncated(self.d, {w: self.image(w) for w in A.ball(A.ROOT, radius, self.d)}, radius)

    def agrees_with(self, other: TreeAut, radius: int, center: str = A.ROOT) -> bool:
        return all(self.image(w) == other.image(w) for w in A.ball(center, radius, self.d))

    def to_json(self) -> dict:
        return {"kind": "recipe", "d": self.d, "depth": _depth_json(self.depth), "data": self._recipe()}

    def _recipe(self) -> dict:
        raise NotImplementedError


def _depth_json(depth):
    return None if depth == INF else int(depth)


class Identity(TreeAut):
    def _image(self, w):
        return w

    def _make_inverse(self):
        return self

    def _recipe(self):
        return {"name": "identity"}


class Affine(TreeAut):
    """``w -> root * sigma(w)`` where ``sigma`` permutes colors letterwise."""

    def __init__(self, d: int, root: str, sigma: Perm):
        super().__init__(d)
        self.root = A.check_address(root, d)
        if sigma.degree != d:
            raise ValueError("color permutation has the wrong degree")
        self.sigma = sigma
        self._table = {str(c + 1): str(sigma[c] + 1) for c in range(d)}

    def _image(self, w):
        return A.mul(self.root, "".join(self._table[c] for c in w))

    def _make_inverse(self):
        si = self.sigma.inverse()
        table = {str(c + 1): str(si[c] + 1) for c in range(self.d)}
        return Affine(self.d, "".join(table[c] for c in A.inv(self.root)), si)

    def _recipe(self):
        return {"name": "affine", "root": self.root, "perm": list(self.sigma)}


LocalRule = Callable[[tuple], "Perm | None"]


class Portrait(TreeAut):
    """An automorphism fixing ``center`` given by local permutations in digit coordinates.

    ``root_perm`` acts on the ``d`` first digits; ``rule(prefix)`` returns the
    permutation of the ``d-1`` outward digits below the vertex with digit
    string ``prefix`` (``None`` means identity).  With the identity rule the
    map below a moved vertex is the color-preserving one, with the inward color
    relabeled in increasing order.
    """

    def __init__(self, d: int, center: str, root_perm: Perm, rule: LocalRule | None = None,
                 table: dict | None = None, inverted: bool = False, name: str = "portrait",
                 params: dict | None = None):
        super().__init__(d)
        self.center = A.check_address(center, d)
        self.root_perm = root_perm
        self.table = dict(table or {})
        self.rule = rule
        self.inverted = inverted
        self.name = name
        self.params = params or {}
        self._root_inv = root_perm.inverse()

    def local(self, prefix: tuple):
        p = self.table.get(prefix)
        if p is None and self.rule is not None:
            p = self.rule(prefix)
        return p

    def _rooted(self, x: tuple) -> tuple:
        if not x:
            return x
        if not self.inverted:
            out = [self.root_perm[x[0]]]
            for k in range(1, len(x)):
                p = self.local(x[:k])
                out.append(x[k] if p is None else p[x[k]])
            return tuple(out)
        src = [self._root_inv[x[0]]]
        for k in range(1, len(x)):
            p = self.local(tuple(src))
            src.append(x[k] if p is None else p.inverse()[x[k]])
        return tuple(src)

    def _image(self, w):
        rel = A.mul(A.inv(self.center), w)
        out = A.from_digits(self._rooted(A.to_digits(rel)))
        return A.mul(self.center, out)

    def _make_inverse(self):
        return Portrait(self.d, self.center, self.root_perm, self.rule, self.table,
                        not self.inverted, self.name, self.params)

    def _recipe(self):
        doc = {"name": self.name, "center": self.center, **self.params}
        if self.name == "portrait":
            doc["root_perm"] = list(self.root_perm)
            doc["local"] = {"".join(map(str, k)): list(v) for k, v in sorted(self.table.items())}
        if self.inverted:
            doc = {"name": "inverse", "base": doc}
        return doc


class Product(TreeAut):
    """``f1 * f2 * ... * fk``: apply ``fk`` first.  Nested products are flattened."""

    def __init__(self, *factors: TreeAut):
        flat: list[TreeAut] = []
        for f in factors:
            if isinstance(f, Product):
                flat.extend(f.factors)
            elif not isinstance(f, Identity):
                flat.append(f)
        depth = INF
        disp_root = A.ROOT
        for f in reversed(flat):
            if f.depth != INF:
                depth = min(depth, f.depth - len(disp_root))
            if depth < 0:
                raise DepthExhausted("composition has negative known depth", depth=depth)
            disp_root = f.image(disp_root)
        super().__init__(flat[0].d if flat else factors[0].d, depth)
        self.factors = tuple(flat)

    def _image(self, w):
        for f in reversed(self.factors):
            w = f.image(w)
        return w

    def _make_inverse(self):
        return Product(*(f.inverse() for f in reversed(self.factors)))

    def _recipe(self):
        return {"name": "product", "factors": [f.to_json()["data"] for f in self.factors]}


class Power(TreeAut):
    def __init__(self, g: TreeAut, k: int):
        if k < 1:
            raise ValueError("Power needs k >= 1")
        depth = g.depth if g.depth == INF else g.depth - (k - 1) * g.displacement()
        if depth < 0:
            raise DepthExhausted("power has negative known depth", depth=depth)
        super().__init__(g.d, depth)
        self.g, self.k = g, k

    def _image(self, w):
        for _ in range(self.k):
            w = self.g.image(w)
        return w

    def _make_inverse(self):
        return Power(self.g.inverse(), self.k)

    def _recipe(self):
        return {"name": "power", "base": self.g.to_json()["data"], "k": self.k}


class Truncated(TreeAut):
    """Images of ``B(v0, depth)`` only."""

    def __init__(self, d: int, mapping: dict, depth: int, check: bool = False):
        super().__init__(d, depth)
        self.mapping = dict(mapping)
        if check:
            self.validate()

    def _image(self, w):
        try:
            return self.mapping[w]
        except KeyError:
            raise DepthExhausted(f"no image recorded for {w!r}", vertex=w) from None

    def validate(self) -> None:
        dom = A.ball(A.ROOT, int(self.depth), self.d)
        if set(self.mapping) != set(dom):
            raise InvgenError("truncation must list exactly the ball of its depth")
        if len(set(self.mapping.values())) != len(self.mapping):
            raise InvgenError("truncation is not injective")
        for w in dom:
            if not A.is_address(self.mapping[w], self.d):
                raise InvgenError(f"bad image address {self.mapping[w]!r}")
            if w and A.dist(self.mapping[w], self.mapping[w[:-1]]) != 1:
                raise InvgenError(f"adjacency broken at {w!r}")

    def _make_inverse(self):
        inv = {v: k for k, v in self.mapping.items()}
        N = int(self.depth) - self.displacement()
        if N < 0:
            raise DepthExhausted("inverse has negative known depth")
        return Truncated(self.d, {w: inv[w] for w in A.ball(A.ROOT, N, self.d)}, N)

    def to_json(self) -> dict:
        return {"kind": "truncation", "d": self.d, "depth": int(self.depth),
                "data": [f"{k}→{v}" for k, v in sorted(self.mapping.items(), key=lambda kv: (len(kv[0]), kv[0]))]}


def conjugate(g: TreeAut, c: TreeAut) -> TreeAut:
    """``c g c^-1``: moves a fixed vertex ``v`` of ``g`` to ``c(v)``."""
    return c * g * c.inverse()


def tree_ops(d: int, radius: int = 4) -> GroupOps:
    """Group operations; identity is tested on ``B(v0, radius)``."""
    ident = Identity(d)
    return GroupOps(
        mul=lambda a, b: a * b,
        inv=lambda a: a.inverse(),
        identity=ident,
        is_identity=lambda a: a.agrees_with(ident, radius),
        eq=lambda a, b: a.agrees_with(b, radius),
    )


# ---------------------------------------------------------------------------
# canonical constructions


def transposition(d: int, a: int, b: int) -> Perm:
    return Perm.cycle(d, a - 1, b - 1)


def make_hyperbolic_translation(d: int = 3) -> Affine:
    """Translation by 1 along the axis ``...2 1 2 | 1 2 1...`` through ``v0``, toward color 1."""
    return Affine(d, "1", transposition(d, 1, 2))


def make_edge_flip(d: int = 3, vertex: str = A.ROOT, color: str = "1") -> TreeAut:
    """Flip of the edge at ``vertex`` with the given color, preserving all colors."""
    flip = Affine(d, color, Perm.identity(d))
    if vertex == A.ROOT:
        return flip
    move = Affine(d, vertex, Perm.identity(d))
    return conjugate(flip, move)


def _odometer_rule(d: int):
    top, rest = d - 1, d - 2
    cycle = Perm.cycle(d - 1, *range(d - 1)) if d > 2 else Perm.identity(1)

    def rule(prefix):
        if prefix[0] == top and all(x == rest for x in prefix[1:]):
            return cycle
        return None

    return rule


def make_spherically_transitive(v: str = A.ROOT, d: int = 3) -> Portrait:
    """Odometer about ``v``: adds 1 to the first digit mod ``d`` and carries mod ``d-1``."""
    return Portrait(d, v, Perm.cycle(d, *range(d)), _odometer_rule(d), name="odometer")


@dataclass(frozen=True)
class TypeSpec:
    """Type ``(n, P)``: ``P`` partitions ``{1..d}`` when ``n = 1`` and ``{1..d-1}`` otherwise."""

    n: int
    blocks: tuple
    d: int = 3

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        if self.n < 1:
            raise InvalidPartition("n must be at least 1")
        size = self.d if self.n == 1 else self.d - 1
        flat = sorted(x for b in blocks for x in b)
        if flat != list(range(1, size + 1)) or any(not b for b in blocks):
            raise InvalidPartition(f"blocks must partition 1..{size}", blocks=[list(b) for b in blocks])
        if not self.nontrivial:
            raise InvalidPartition("partition must have a block of size > 1")

    @property
    def nontrivial(self) -> bool:
        return any(len(b) > 1 for b in self.blocks)

    @property
    def degree(self) -> int:
        return self.d if self.n == 1 else self.d - 1

    def shape(self) -> tuple:
        return tuple(sorted((len(b) for b in self.blocks), reverse=True))

    def perm(self) -> Perm:
        """Product of ascending cycles, one per block, on points ``0..degree-1``."""
        img = list(range(self.degree))
        for b in self.blocks:
            for x, y in zip(b, b[1:] + b[:1]):
                img[x - 1] = y - 1
        return Perm(img)

    def __str__(self):
        return f"({self.n},{'|'.join(''.join(map(str, b)) for b in self.blocks)})"

    @classmethod
    def parse(cls, text: str, d: int) -> TypeSpec:
        """``"2:12"`` or ``"1:12|3"``; singleton blocks may be omitted."""
        n_text, _, blocks_text = text.partition(":")
        n = int(n_text)
        blocks = [tuple(int(ch) for ch in part) for part in blocks_text.split("|") if part]
        size = d if n == 1 else d - 1
        seen = {x for b in blocks for x in b}
        blocks += [(x,) for x in range(1, size + 1) if x not in seen]
        return cls(n, tuple(blocks), d)


def all_type_specs(d: int, n: int) -> list[TypeSpec]:
    size = d if n == 1 else d - 1
    out = []
    for p in multiset_partitions(list(range(1, size + 1))):
        if any(len(b) > 1 for b in p):
            out.append(TypeSpec(n, tuple(tuple(b) for b in p), d))
    return sorted(out, key=lambda t: (t.shape(), t.blocks))


def make_type_nP(v: str, spec: TypeSpec, u: str | None = None) -> Portrait:
    """Canonical element of type ``(n, P)`` about ``v``.

    For ``n = 1`` it permutes the neighbors of ``v``; for ``n > 1`` it permutes
    the outward neighbors of the witness ``u`` on ``S(v, n-1)``.  Ascending
    cycles realize ``P``; everything else is the identity portrait.
    """
    d = spec.d
    A.check_address(v, d)
    params = {"n": spec.n, "blocks": [list(b) for b in spec.blocks]}
    if spec.n == 1:
        if u is not None:
            raise InvalidPartition("n = 1 takes no witness")
        return Portrait(d, v, spec.perm(), name="type", params=params)
    if u is None:
        raise InvalidPartition("n > 1 needs a witness vertex")
    A.check_address(u, d)
    if A.dist(v, u) != spec.n - 1:
        raise InvalidPartition(f"witness must lie on S(v, {spec.n - 1})")
    prefix = A.to_digits(A.mul(A.inv(v), u))
    params["witness"] = u
    return Portrait(d, v, Perm.identity(d), table={prefix: spec.perm()}, name="type", params=params)


def random_stabilizer_element(rng: random.Random, d: int, radius: int, v: str = A.ROOT) -> Portrait:
    """Uniform random local permutations on ``B(v, radius-1)``; identity portrait below."""
    from ..perm import symmetric_elements

    sd, sd1 = symmetric_elements(d), symmetric_elements(d - 1)
    root = rng.choice(sd)
    table = {}
    for w in A.ball(A.ROOT, radius - 1, d)[1:]:
        p = rng.choice(sd1)
        if not p.is_identity():
            table[A.to_digits(w)] = p
    return Portrait(d, v, root, table=table)


def random_automorphism(rng: random.Random, d: int, moves: int = 3, radius: int = 3) -> TreeAut:
    """A random product of translations, edge flips and random rooted portraits."""
    g: TreeAut = Identity(d)
    t = make_hyperbolic_translation(d)
    for _ in range(moves):
        kind = rng.randrange(4)
        if kind == 0:
            f = t if rng.random() < 0.5 else t.inverse()
        elif kind == 1:
            f = make_edge_flip(d, A.ROOT, str(rng.randint(1, d)))
        elif kind == 2:
            f = Affine(d, A.ROOT, Perm(rng.sample(range(d), d)))
        else:
            f = random_stabilizer_element(rng, d, radius)
        g = f * g
    return g


# ---------------------------------------------------------------------------
# serialization


def element_from_json(doc: dict) -> TreeAut:
    d = int(doc.get("d", 3))
    if doc.get("kind") == "truncation":
        mapping = {}
        for item in doc["data"]:
            k, _, v = item.replace("->", "→").partition("→")
            mapping[k.strip()] = v.strip()
        return Truncated(d, mapping, int(doc["depth"]), check=True)
    return recipe_from_json(doc["data"], d)


def recipe_from_json(data: dict, d: int) -> TreeAut:
    name = data["name"]
    center = data.get("center", A.ROOT)
    if name == "identity":
        return Identity(d)
    if name == "translation":
        return make_hyperbolic_translation(d)
    if name == "flip":
        return make_edge_flip(d, data.get("vertex", A.ROOT), str(data.get("color", "1")))
    if name == "affine":
        return Affine(d, data["root"], Perm(data["perm"]))
    if name == "odometer":
        return make_spherically_transitive(center, d)
    if name == "type":
        spec = TypeSpec(int(data["n"]), tuple(tuple(b) for b in data["blocks"]), d)
        return make_type_nP(center, spec, data.get("witness"))
    if name == "portrait":
        table = {tuple(int(ch) for ch in k): Perm(v) for k, v in data.get("local", {}).items()}
        return Portrait(d, center, Perm(data["root_perm"]), table=table)
    if name == "product":
        out: TreeAut = Identity(d)
        for f in data["factors"]:
            out = out * recipe_from_json(f, d)
        return out
    if name == "power":
        return recipe_from_json(data["base"], d) ** int(data["k"])
    if name == "inverse":
        return recipe_from_json(data["base"], d).inverse()
    if name == "conjugate":
        return conjugate(recipe_from_json(data["g"], d), recipe_from_json(data["by"], d))
    raise ValueError(f"unknown element recipe {name!r}")


def parse_element(text: str, d: int = 3) -> TreeAut:
    """Short names used by the CLI.

    ``translation``, ``flip``, ``identity``, ``odometer[@v]`` and
    ``type:<n>:<blocks>[@v][/u]`` such as ``type:2:12/1``.
    """
    text = text.strip()
    if text.startswith("{"):
        import json

        return element_from_json(json.loads(text))
    witness = None
    if "/" in text:
        text, witness = text.split("/", 1)
    center = A.ROOT
    if "@" in text:
        text, center = text.split("@", 1)
    if text == "translation":
        return make_hyperbolic_translation(d)
    if text == "flip":
        return make_edge_flip(d)
    if text == "identity":
        return Identity(d)
    if text == "odometer":
        return make_spherically_transitive(center, d)
    if text.startswith("type:"):
        return make_type_nP(center, TypeSpec.parse(text[5:], d), witness)
    raise ValueError(f"unknown element {text!r}")
