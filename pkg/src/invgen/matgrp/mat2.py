"""2x2 matrices over a pluggable scalar type.

Entries are ``int``/``Fraction`` (exact rational), ``float`` or ``complex``
(double precision), :class:`GaussianRational` (exact ``Q(i)``), or sympy
expressions.  Only ``+ - * /`` are used, so every type plugs in unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from ..words import GroupOps


@dataclass(frozen=True)
class GaussianRational:
    """``re + im*i`` with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(Fraction(x))
        return None

    def __add__(self, o):
        o = self._lift(o)
        return NotImplemented if o is None else GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        o = self._lift(o)
        return NotImplemented if o is None else GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        p = self * o.conjugate()
        return GaussianRational(p.re / n, p.im / n)

    def __rtruediv__(self, o):
        return GaussianRational._lift(o) / self

    def __eq__(self, o):
        o = self._lift(o)
        return o is not None and self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"{self.re}+{self.im}i" if self.im > 0 else f"{self.re}{self.im}i"


def is_exact(x) -> bool:
    return isinstance(x, (Rational, GaussianRational))


def exact_div(x, y):
    """Division that stays in ``Fraction`` for rational inputs."""
    if isinstance(x, Rational) and isinstance(y, Rational):
        q = Fraction(x) / Fraction(y)
        return int(q) if q.denominator == 1 else q
    return x / y


def sqrt_rational(q) -> Fraction | None:
    """Exact square root of a nonnegative rational, or ``None`` if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Mat2:
    a: object
    b: object
    c: object
    d: object

    @classmethod
    def of(cls, rows) -> Mat2:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls, one=1) -> Mat2:
        return cls(one, 0 * one, 0 * one, one)

    @classmethod
    def diag(cls, x, y) -> Mat2:
        return cls(x, 0 * x, 0 * x, y)

    @property
    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, o):
        if isinstance(o, Mat2):
            return Mat2(
                self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d,
            )
        return Mat2(self.a * o, self.b * o, self.c * o, self.d * o)

    def __rmul__(self, s):
        return Mat2(s * self.a, s * self.b, s * self.c, s * self.d)

    def __add__(self, o: Mat2) -> Mat2:
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: Mat2) -> Mat2:
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self) -> Mat2:
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def inverse(self) -> Mat2:
        D = self.det()
        if D == 1:
            return Mat2(self.d, -self.b, -self.c, self.a)
        if D == 0:
            raise ZeroDivisionError("singular matrix")
        return Mat2(exact_div(self.d, D), exact_div(-self.b, D), exact_div(-self.c, D), exact_div(self.a, D))

    def apply(self, v):
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def map(self, f) -> Mat2:
        return Mat2(f(self.a), f(self.b), f(self.c), f(self.d))

    def to_float(self) -> Mat2:
        return self.map(_to_number)

    def is_exact(self) -> bool:
        return all(is_exact(x) for x in self.entries())

    def is_identity(self) -> bool:
        return self.a == 1 and self.d == 1 and self.b == 0 and self.c == 0

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def max_abs(self) -> float:
        return max(abs(complex(_to_number(x))) for x in self.entries())

    def to_json(self):
        return [[scalar_to_json(self.a), scalar_to_json(self.b)],
                [scalar_to_json(self.c), scalar_to_json(self.d)]]

    def __str__(self):
        return "(" + " ".join(map(str, (self.a, self.b))) + "; " + " ".join(map(str, (self.c, self.d))) + ")"


def columns(x1, x2) -> Mat2:
    """Matrix with the given column vectors."""
    return Mat2(x1[0], x2[0], x1[1], x2[1])


def _to_number(x):
    if isinstance(x, (int, Fraction)):
        return float(x)
    if isinstance(x, GaussianRational):
        return complex(x) if x.im else float(x.re)
    if isinstance(x, (float, complex)):
        return x
    # sympy expressions
    z = complex(x)
    return z.real if z.imag == 0 else z


def max_diff(p: Mat2, q: Mat2) -> float:
    return (p.to_float() - q.to_float()).max_abs()


# ---------------------------------------------------------------------------
# serialization


def scalar_to_json(x):
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, GaussianRational):
        return {"re": scalar_to_json(x.re), "im": scalar_to_json(x.im)}
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, float):
        return x
    return str(x)


def scalar_from_json(v):
    if isinstance(v, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        q = Fraction(v.strip())
        return int(q) if q.denominator == 1 else q
    if isinstance(v, dict):
        re, im = scalar_from_json(v["re"]), scalar_from_json(v.get("im", 0))
        if isinstance(re, float) or isinstance(im, float):
            return complex(re, im)
        return GaussianRational(re, im)
    raise ValueError(f"cannot read scalar {v!r}")


def mat_from_json(doc) -> Mat2:
    return Mat2.of([[scalar_from_json(x) for x in row] for row in doc])


# ---------------------------------------------------------------------------
# group structure


def psl_equal(p: Mat2, q: Mat2, tol: float = 1e-12) -> bool:
    """``p == lambda q`` for some scalar ``lambda`` (all 2x2 minors vanish)."""
    if p.det() == 0 or q.det() == 0:
        raise ValueError("psl_equal needs invertible matrices")
    pe, qe = p.entries(), q.entries()
    minors = [pe[i] * qe[j] - pe[j] * qe[i] for i in range(4) for j in range(i + 1, 4)]
    if p.is_exact() and q.is_exact():
        return all(m == 0 for m in minors)
    scale = max(p.max_abs(), 1.0) * max(q.max_abs(), 1.0)
    return all(abs(complex(_to_number(m))) <= tol * scale for m in minors)


def mat_ops(projective: bool = False, one=1, tol: float = 1e-12) -> GroupOps:
    """Group operations on ``Mat2``; ``projective`` treats scalar matrices as identity."""

    def is_identity(m: Mat2) -> bool:
        if m.is_exact():
            return m.is_scalar() if projective else m.is_identity()
        ref = Mat2(m.a, 0, 0, m.a) if projective else Mat2.identity(1.0)
        return max_diff(m, ref) <= tol * max(1.0, m.max_abs())

    def eq(p: Mat2, q: Mat2) -> bool:
        if projective:
            return psl_equal(p, q, tol)
        if p.is_exact() and q.is_exact():
            return p == q
        return max_diff(p, q) <= tol * max(1.0, p.max_abs(), q.max_abs())

    return GroupOps(
        mul=lambda p, q: p * q,
        inv=lambda p: p.inverse(),
        identity=Mat2.identity(one),
        is_identity=is_identity,
        eq=eq,
    )
