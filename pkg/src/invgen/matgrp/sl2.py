"""Conjugacy classes in SL2(R), the Lie algebra sl2(R) and its exponential."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import sympy

from ..errors import NotUnimodular, ZeroElement
from .mat2 import Mat2, columns, exact_div, is_exact, sign, sqrt_rational

DET_TOL = 1e-12
BORDERLINE_TOL = 1e-9


# ---------------------------------------------------------------------------
# group classes


@dataclass(frozen=True)
class Hyperbolic:
    lam: object  # eigenvalue with |lam| > 1; exact when rational
    kind = "Hyperbolic"

    def canonical(self) -> Mat2:
        return Mat2.diag(self.lam, exact_div(1, self.lam))

    def to_json(self):
        return {"kind": self.kind, "lambda": _num_json(self.lam)}


@dataclass(frozen=True)
class ParabolicCentral:
    sign: int
    kind = "ParabolicCentral"

    def canonical(self) -> Mat2:
        return Mat2.diag(self.sign, self.sign)

    def to_json(self):
        return {"kind": self.kind, "sign": self.sign}


@dataclass(frozen=True)
class ParabolicShear:
    """Canonical form ``(diag sign; 0 diag)``."""

    sign: int
    diag: int
    kind = "ParabolicShear"

    def canonical(self) -> Mat2:
        return Mat2(self.diag, self.sign, 0, self.diag)

    def to_json(self):
        return {"kind": self.kind, "sign": self.sign, "diag": self.diag}


@dataclass(frozen=True)
class Elliptic:
    """Rotation ``(cos -sin; sin cos)`` with ``sign(sin) = sin_sign``."""

    cos_theta: object
    sin_sign: int
    kind = "Elliptic"

    @property
    def sin_theta(self):
        s = sqrt_rational(1 - self.cos_theta ** 2) if is_exact(self.cos_theta) else None
        if s is None:
            s = math.sqrt(max(0.0, 1.0 - float(self.cos_theta) ** 2))
        return self.sin_sign * s

    @property
    def theta(self) -> float:
        return self.sin_sign * math.acos(float(self.cos_theta))

    def canonical(self) -> Mat2:
        s = self.sin_theta
        return Mat2(self.cos_theta, -s, s, self.cos_theta)

    def to_json(self):
        return {"kind": self.kind, "cos_theta": _num_json(self.cos_theta), "sin_sign": self.sin_sign}


@dataclass(frozen=True)
class Borderline:
    """Double-precision input whose trace is within tolerance of +-2."""

    trace: float
    kind = "Borderline"

    def canonical(self):
        return None

    def to_json(self):
        return {"kind": self.kind, "trace": self.trace}


Sl2ConjClass = Union[Hyperbolic, ParabolicCentral, ParabolicShear, Elliptic, Borderline]


def _num_json(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x if isinstance(x, int) else float(x)


def _sqrt(x):
    """Exact root when ``x`` is a rational square, otherwise a float."""
    if is_exact(x):
        r = sqrt_rational(x)
        if r is not None:
            return int(r) if r.denominator == 1 else r
    return math.sqrt(float(x))


def _eigvec(g: Mat2, mu):
    """A nonzero vector in ``ker(g - mu)``; ``g - mu`` must be singular.

    Of the two row-derived candidates the larger one is used, which keeps
    double-precision input well conditioned.
    """
    if g.b == 0 and g.c == 0:
        return (1, 0) if g.a == mu else (0, 1)
    u, v = (g.b, mu - g.a), (mu - g.d, g.c)
    size = lambda w: max(abs(complex(w[0])), abs(complex(w[1])))
    return u if size(u) >= size(v) else v


def _scale_cols(x1, x2, s):
    return (x1[0] * s, x1[1] * s), (x2[0] * s, x2[1] * s)


def _det_cols(x1, x2):
    return x1[0] * x2[1] - x1[1] * x2[0]


def _normalize_det(x1, x2):
    """Rescale both columns by ``1/sqrt(det)`` (det must be positive)."""
    D = _det_cols(x1, x2)
    r = _sqrt(D)
    return columns(*_scale_cols(x1, x2, exact_div(1, r)))


def sl2_classify(g: Mat2):
    """Return ``(class, X)`` with ``X^-1 g X`` the canonical form of the class.

    ``X`` has determinant 1; it is exact whenever the required square roots
    are rational and a float matrix otherwise.
    """
    exact = g.is_exact()
    det = g.det()
    if exact:
        if det != 1:
            raise NotUnimodular(f"det = {det}", det=str(det))
    elif abs(det - 1) > DET_TOL:
        raise NotUnimodular(f"det = {det}", det=float(det))
    t = g.trace()
    disc = t * t - 4
    if not exact and abs(disc) <= BORDERLINE_TOL:
        return Borderline(float(t)), None
    one = Mat2.identity()

    if disc > 0:
        s = sign(t)
        root = _sqrt(disc)
        lam = exact_div(t + s * root, 2)
        inv_lam = exact_div(t - s * root, 2)
        if g.b == 0 and g.c == 0:
            X = one if g.a == lam else Mat2(0, -1, 1, 0)
        else:
            x1, x2 = _eigvec(g, lam), _eigvec(g, inv_lam)
            D = _det_cols(x1, x2)
            X = columns((exact_div(x1[0], D), exact_div(x1[1], D)), x2)
        return Hyperbolic(lam), X

    if disc == 0:
        eps = sign(t)
        if g.b == 0 and g.c == 0:
            return ParabolicCentral(eps), one
        N = g - Mat2.diag(eps, eps)
        x2 = (0, 1) if N.b != 0 else (1, 0)
        x1 = N.apply(x2)
        D = _det_cols(x1, x2)
        s = sign(D)
        # scale x2 by alpha so that det(N x2, x2) = s
        alpha = exact_div(1, _sqrt(abs(D)))
        x2 = (x2[0] * alpha, x2[1] * alpha)
        x1 = N.apply(x2)
        x1 = (exact_div(x1[0], s), exact_div(x1[1], s))
        return ParabolicShear(s, eps), columns(x1, x2)

    cos = exact_div(t, 2)
    cls = Elliptic(cos, sign(g.c))
    sin = cls.sin_theta
    x1 = (1, 0)
    x2 = (exact_div(g.a - cos, sin), exact_div(g.c, sin))
    return cls, _normalize_det(x1, x2)


def classify_key(cls) -> tuple:
    """Hashable identity of a class, for invariance comparisons."""
    return (cls.kind,) + tuple(cls.to_json().values())[1:]


# ---------------------------------------------------------------------------
# Lie algebra


@dataclass(frozen=True)
class Sl2LieElem:
    """Traceless ``(a b; c -a)``."""

    a: object
    b: object
    c: object

    def matrix(self) -> Mat2:
        return Mat2(self.a, self.b, self.c, -self.a)

    def scaled(self, s) -> Sl2LieElem:
        return Sl2LieElem(self.a * s, self.b * s, self.c * s)

    def disc(self):
        return self.a * self.a + self.b * self.c

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0


@dataclass(frozen=True)
class Split:
    t: object
    kind = "Split"

    def canonical(self) -> Mat2:
        return Mat2.diag(self.t, -self.t)


@dataclass(frozen=True)
class Nilpotent:
    """Canonical ``(0 sign; 0 0)``."""

    sign: int = 1
    kind = "Nilpotent"

    def canonical(self) -> Mat2:
        return Mat2(0, self.sign, 0, 0)


@dataclass(frozen=True)
class Rotation:
    """Canonical ``sign * theta * (0 1; -1 0)``."""

    theta: object
    sign: int = 1
    kind = "Rotation"

    def canonical(self) -> Mat2:
        st = self.sign * self.theta
        return Mat2(0, st, -st, 0)


@dataclass(frozen=True)
class LieOrbit:
    orbit: Union[Split, Nilpotent, Rotation]
    conjugator: Mat2  # C with C^-1 X C = orbit.canonical()

    @property
    def kind(self) -> str:
        return self.orbit.kind


def _lie_scalar(x):
    if isinstance(x, (int, Fraction)):
        return sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else sympy.Integer(x)
    return x


def _simplify(m: Mat2) -> Mat2:
    return m.map(lambda x: sympy.nsimplify(sympy.radsimp(x)) if isinstance(x, sympy.Basic) else x)


def lie_classify(X: Sl2LieElem) -> LieOrbit:
    """Split / nilpotent / rotation orbit of a nonzero ``X`` with an SL2 conjugator.

    Exact (sympy, radicals allowed) for rational input, floats otherwise.
    """
    if X.is_zero():
        raise ZeroElement("X must be nonzero")
    exact = all(is_exact(v) for v in (X.a, X.b, X.c))
    if exact:
        a, b, c = (_lie_scalar(v) for v in (X.a, X.b, X.c))
        sqrt = sympy.sqrt
    else:
        a, b, c = float(X.a), float(X.b), float(X.c)
        sqrt = math.sqrt
    disc = a * a + b * c
    M = Mat2(a, b, c, -a)

    if disc > 0:
        t = sqrt(disc)
        if b == 0 and c == 0:
            one, zero = a / a, 0 * a
            x1, x2 = ((one, zero), (zero, one)) if a > 0 else ((zero, one), (one, zero))
        else:
            x1, x2 = _eigvec(M, t), _eigvec(M, -t)
        # GL2 conjugator made unimodular by rescaling its first column
        D = _det_cols(x1, x2)
        C = columns((x1[0] / D, x1[1] / D), x2)
        orbit = Split(t)
    elif disc == 0:
        x2 = (0, 1) if b != 0 else (1, 0)
        x1 = M.apply(x2)
        D = _det_cols(x1, x2)
        s = 1 if D > 0 else -1
        alpha = 1 / sqrt(abs(D))
        x2 = (x2[0] * alpha, x2[1] * alpha)
        x1 = M.apply(x2)
        C = columns((x1[0] * s, x1[1] * s), x2)
        orbit = Nilpotent(s)
    else:
        theta = sqrt(-disc)
        s = -1 if c > 0 else 1
        u = (1, 0)
        Xu = M.apply(u)
        v = (-Xu[0] / (s * theta), -Xu[1] / (s * theta))
        D = _det_cols(u, v)
        r = 1 / sqrt(D)
        C = columns((u[0] * r, u[1] * r), (v[0] * r, v[1] * r))
        orbit = Rotation(theta, s)
    if exact:
        C = _simplify(C)
        orbit = type(orbit)(*(sympy.nsimplify(f) if isinstance(f, sympy.Basic) else f
                              for f in _fields(orbit)))
    return LieOrbit(orbit, C)


def _fields(obj):
    return [getattr(obj, f) for f in obj.__dataclass_fields__]


# ---------------------------------------------------------------------------
# exponential


def exp_sl2(X: Sl2LieElem) -> Mat2:
    """``exp(X)`` in closed form.

    Canonical inputs hit the subgroup formulas directly: diagonal gives
    ``diag(e^t, e^-t)``, strictly upper gives ``(1 b; 0 1)``, and
    ``(0 t; -t 0)`` gives ``(cos t, sin t; -sin t, cos t)``.  Everything
    else uses ``X^2 = (a^2 + bc) I``.
    """
    a, b, c = X.a, X.b, X.c
    if b == 0 and c == 0:
        return Mat2.diag(math.exp(a), math.exp(-a))
    if a == 0 and c == 0:
        return Mat2(1, b, 0, 1)
    if a == 0 and b == 0:
        return Mat2(1, 0, c, 1)
    if a == 0 and c == -b:
        t = float(b)
        return Mat2(math.cos(t), math.sin(t), -math.sin(t), math.cos(t))
    delta = a * a + b * c
    if delta == 0:
        return Mat2(1 + a, b, c, 1 - a)
    a, b, c, delta = float(a), float(b), float(c), float(delta)
    if delta > 0:
        r = math.sqrt(delta)
        ch, sh = math.cosh(r), math.sinh(r) / r
    else:
        r = math.sqrt(-delta)
        ch, sh = math.cos(r), math.sin(r) / r
    return Mat2(ch + sh * a, sh * b, sh * c, ch - sh * a)
