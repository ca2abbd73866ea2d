"""Free words, one-variable monomials over a group, and bounded freeness checks.

Group elements are opaque; every operation takes a :class:`GroupOps` bundle
so permutations, 2x2 matrices and tree automorphisms all plug in.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

from .config import budget
from .errors import BudgetExceeded, VariableOutOfRange

Letter = tuple[int, int]  # (variable index >= 1, exponent +-1)


@dataclass(frozen=True)
class GroupOps:
    mul: Callable[[Any, Any], Any]
    inv: Callable[[Any], Any]
    identity: Any
    is_identity: Callable[[Any], bool]
    eq: Callable[[Any, Any], bool] = field(default=lambda a, b: a == b)

    def power(self, g, k: int):
        base = g if k >= 0 else self.inv(g)
        out = self.identity
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def conj(self, g, h):
        """``h^-1 g h``."""
        return self.mul(self.mul(self.inv(h), g), h)


def perm_ops(degree: int) -> GroupOps:
    from .perm import Perm

    return GroupOps(
        mul=lambda a, b: a * b,
        inv=lambda a: a.inverse(),
        identity=Perm.identity(degree),
        is_identity=lambda a: a.is_identity(),
    )


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def inverse(self) -> Word:
        return Word(tuple((i, -e) for i, e in reversed(self.letters)))

    def max_var(self) -> int:
        return max((i for i, _ in self.letters), default=0)

    def runs(self) -> list[tuple[int, int]]:
        """Maximal runs ``x_i^m`` as ``(i, m)``."""
        out: list[list[int]] = []
        for i, e in self.letters:
            if out and out[-1][0] == i and (out[-1][1] > 0) == (e > 0):
                out[-1][1] += e
            else:
                out.append([i, e])
        return [(i, m) for i, m in out]


def reduce(raw: Sequence[Letter]) -> Word:
    """Free reduction: cancel adjacent ``x_i^e x_i^-e`` until none remain."""
    out: list[Letter] = []
    for i, e in raw:
        if e not in (1, -1) or i < 1:
            raise ValueError(f"bad letter {(i, e)!r}")
        if out and out[-1] == (i, -e):
            out.pop()
        else:
            out.append((i, e))
    return Word(tuple(out))


def is_freely_reduced(letters: Sequence[Letter]) -> bool:
    return all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(letters, letters[1:]))


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    return " ".join(f"x{i}" if e == 1 else f"x{i}^-1" for i, e in w.letters)


_TOKEN = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str) -> Word:
    """Parse ``"x1 x2^-1 x1"``; ``x1^3`` expands to three letters; ``"1"`` is empty."""
    s = text.strip()
    if s in ("", "1", "e"):
        return Word()
    raw = []
    for tok in s.replace("*", " ").split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse word token {tok!r}")
        i = int(m.group(1))
        k = int(m.group(2)) if m.group(2) is not None else 1
        raw.extend([(i, 1 if k > 0 else -1)] * abs(k))
    return reduce(raw)


@dataclass(frozen=True)
class TupleSpec:
    """Element orders of a tuple; ``0`` encodes infinite order."""

    orders: tuple

    def __post_init__(self):
        if any(o < 0 for o in self.orders):
            raise ValueError("orders must be 0 (infinite) or positive")

    @classmethod
    def infinite(cls, n: int) -> TupleSpec:
        return cls((0,) * n)


def is_reduced_on_tuple(w: Word, spec: TupleSpec) -> bool:
    if w.max_var() > len(spec.orders):
        raise VariableOutOfRange(
            f"word uses x{w.max_var()} but the tuple has {len(spec.orders)} entries"
        )
    if not is_freely_reduced(w.letters):
        return False
    for i, m in w.runs():
        order = spec.orders[i - 1]
        if order and abs(m) >= order:
            return False
    return True


def letter_order(n_vars: int) -> list[Letter]:
    """``x1 < x1^-1 < x2 < x2^-1 < ...``"""
    return [(i, e) for i in range(1, n_vars + 1) for e in (1, -1)]


def _extensions(letters, spec, last, run):
    """Letters that may follow a word ending in ``last`` with current run length ``run``."""
    for i, e in letters:
        if last is not None and last == (i, -e):
            continue
        r = run + 1 if last == (i, e) else 1
        order = spec.orders[i - 1]
        if order and r >= order:
            continue
        yield (i, e), r


def enumerate_reduced_words(n_vars: int, spec: TupleSpec, max_len: int) -> Iterator[Word]:
    """Every nonempty word of length <= ``max_len`` reduced on the tuple, length-lex."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if len(spec.orders) < n_vars:
        raise VariableOutOfRange("spec shorter than the number of variables")
    letters = letter_order(n_vars)

    def gen(prefix, last, run, remaining):
        if remaining == 0:
            yield Word(tuple(prefix))
            return
        for letter, r in _extensions(letters, spec, last, run):
            prefix.append(letter)
            yield from gen(prefix, letter, r, remaining - 1)
            prefix.pop()

    for length in range(1, max_len + 1):
        yield from gen([], None, 0, length)


def evaluate(w: Word, values: Sequence, ops: GroupOps):
    """Image of ``w`` under ``x_i -> values[i-1]``."""
    if w.max_var() > len(values):
        raise VariableOutOfRange("tuple too short for word")
    invs = {}
    out = ops.identity
    for i, e in w.letters:
        if e == 1:
            g = values[i - 1]
        else:
            g = invs.get(i)
            if g is None:
                g = invs[i] = ops.inv(values[i - 1])
        out = ops.mul(out, g)
    return out


def probe_order(g, ops: GroupOps, bound: int = 24) -> int:
    """Order of ``g`` if at most ``bound``, else 0 (recorded as infinite)."""
    x = g
    for k in range(1, bound + 1):
        if ops.is_identity(x):
            return k
        x = ops.mul(x, g)
    return 0


# ---------------------------------------------------------------------------
# bounded freeness


@dataclass(frozen=True)
class FreenessCertificate:
    tuple_id: str
    L: int
    orders: tuple
    relation: Word | None = None
    words_checked: int = 0

    @property
    def status(self) -> str:
        return "FreeUpTo" if self.relation is None else "Relation"

    @property
    def is_free(self) -> bool:
        return self.relation is None

    def to_json(self) -> dict:
        out = {"tuple_id": self.tuple_id, "L": self.L, "status": self.status,
               "orders": list(self.orders), "words_checked": self.words_checked}
        if self.relation is not None:
            out["relation"] = format_word(self.relation)
        return out


def count_reduced_words(spec: TupleSpec, max_len: int) -> int:
    """Number of words :func:`enumerate_reduced_words` would produce."""
    n = len(spec.orders)
    letters = letter_order(n)
    # state: (last letter, run) -> count
    level = {(None, 0): 1}
    total = 0
    for _ in range(max_len):
        nxt: dict = {}
        for (last, run), c in level.items():
            for letter, r in _extensions(letters, spec, last, run):
                nxt[(letter, r)] = nxt.get((letter, r), 0) + c
        level = nxt
        total += sum(level.values())
    return total


def walk_word_values(values: Sequence, L: int, ops: GroupOps, spec: TupleSpec):
    """Yield ``(letters, value)`` for every word reduced on the tuple, length-lex.

    Values are built from the prefix of each word, one multiplication per word.
    """
    letters = letter_order(len(values))
    gens = {}
    for i, e in letters:
        gens[(i, e)] = values[i - 1] if e == 1 else ops.inv(values[i - 1])
    # level entries: (letters tuple, value, last letter, run length)
    level = [((), ops.identity, None, 0)]
    for _ in range(L):
        nxt = []
        for word, val, last, run in level:
            for letter, r in _extensions(letters, spec, last, run):
                w = word + (letter,)
                v = ops.mul(val, gens[letter])
                yield w, v
                nxt.append((w, v, letter, r))
        level = nxt


def free_up_to(values: Sequence, L: int, ops: GroupOps, orders: Sequence[int] | None = None,
               cap: int | None = None, tuple_id: str = "tuple") -> FreenessCertificate:
    """Evaluate every word reduced on the tuple up to length ``L``.

    Returns a certificate with ``relation=None`` when no such word is the
    identity, otherwise the first vanishing word in length-lex order.
    Passing this check is necessary for freeness, not sufficient.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    values = list(values)
    if orders is None:
        orders = [probe_order(g, ops) for g in values]
    spec = TupleSpec(tuple(orders))
    cap = budget().words if cap is None else cap
    total = count_reduced_words(spec, L)
    if total > cap:
        raise BudgetExceeded(f"{total} words exceed the cap {cap}", words=total, cap=cap)
    checked = 0
    for w, v in walk_word_values(values, L, ops, spec):
        checked += 1
        if ops.is_identity(v):
            return FreenessCertificate(tuple_id, L, spec.orders, Word(w), checked)
    return FreenessCertificate(tuple_id, L, spec.orders, None, checked)


# ---------------------------------------------------------------------------
# monomials in one variable over G


@dataclass(frozen=True)
class Monomial:
    """``a0 x^l1 a1 x^l2 ... x^lm am``; ``len(constants) == len(exponents) + 1``."""

    constants: tuple
    exponents: tuple = ()

    def __post_init__(self):
        if len(self.constants) != len(self.exponents) + 1:
            raise ValueError("need exactly one more constant than exponents")
        if any(l == 0 for l in self.exponents):
            raise ValueError("exponents must be nonzero")

    @property
    def is_constant(self) -> bool:
        return not self.exponents


def monomial_evaluate(w: Monomial, g, ops: GroupOps):
    out = w.constants[0]
    for l, a in zip(w.exponents, w.constants[1:]):
        out = ops.mul(ops.mul(out, ops.power(g, l)), a)
    return out


def in_principal_algebraic_set(w: Monomial, g, ops: GroupOps) -> bool:
    return ops.is_identity(monomial_evaluate(w, g, ops))


def monomial_reduce_over_group(w: Monomial, is_central: Callable[[Any], bool], ops: GroupOps) -> Monomial:
    """Cancel ``x^e a x^-e`` with ``a`` central and merge what collapses.

    The induced map ``G -> G`` (hence the principal algebraic set) is unchanged.
    """
    consts = list(w.constants)
    exps = list(w.exponents)
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(exps):
            if exps[k] == 0:
                consts[k] = ops.mul(consts[k], consts[k + 1])
                del consts[k + 1]
                del exps[k]
                changed = True
            else:
                k += 1
        for k in range(1, len(exps)):
            p, q = exps[k - 1], exps[k]
            a = consts[k]
            if (p > 0) != (q > 0) and is_central(a):
                r = min(abs(p), abs(q))
                s = 1 if p > 0 else -1
                exps[k - 1] = p - s * r
                exps[k] = q + s * r
                changed = True
                break
            if (p > 0) == (q > 0) and ops.is_identity(a):
                exps[k - 1] = p + q
                del exps[k]
                del consts[k]
                changed = True
                break
    return Monomial(tuple(consts), tuple(exps))
