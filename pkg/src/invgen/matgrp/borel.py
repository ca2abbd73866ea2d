"""Conjugating a 2x2 matrix into upper-triangular form."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

from ..errors import NoRealRoot, PreconditionViolation
from .mat2 import GaussianRational, Mat2, sqrt_rational

SWAP = Mat2(0, 1, -1, 0)


def lower_shear(x) -> Mat2:
    return Mat2(1, 0 * x, x, 1)


def borel_discriminant(A: Mat2):
    """Discriminant ``(d-a)^2 + 4bc`` of ``b x^2 + (d-a) x - c``."""
    return (A.d - A.a) ** 2 + 4 * A.b * A.c


def conjugate_by_shear(A: Mat2, x) -> Mat2:
    """``X A X^-1`` for ``X = (1 0; x 1)``; its (2,1) entry is ``-(b x^2 + (d-a) x - c)``."""
    X = lower_shear(x)
    Xinv = Mat2(1, 0 * x, -x, 1)
    return X * A * Xinv


def borel_conjugator(A: Mat2, backend: str = "real"):
    """Return ``(x, B)`` with ``B`` upper triangular and conjugate to ``A``.

    ``x`` is the string ``"swap"`` when ``b = 0`` (``B = W A W^-1`` with
    ``W = (0 1; -1 0)``), otherwise a root of ``b x^2 + (d-a) x - c`` and
    ``B = X A X^-1`` with ``X = (1 0; x 1)``.  Roots stay exact (``Fraction``
    or :class:`GaussianRational`) whenever the discriminant is a rational
    square up to sign; otherwise they are doubles.
    """
    if backend not in ("real", "complex"):
        raise ValueError("backend must be 'real' or 'complex'")
    if A.det() == 0:
        raise PreconditionViolation("matrix must be invertible")
    if A.b == 0:
        return "swap", SWAP * A * SWAP.inverse()
    a, b, c, d = A.entries()
    disc = borel_discriminant(A)
    exact = A.is_exact()
    if exact:
        disc = Fraction(disc)
        if disc >= 0:
            r = sqrt_rational(disc)
            if r is not None:
                return _finish(A, (Fraction(a - d) + r) / (2 * Fraction(b)))
            return _finish(A, (float(a - d) + math.sqrt(disc)) / (2 * float(b)))
        if backend == "real":
            raise NoRealRoot("no real root: discriminant is negative", discriminant=str(disc))
        r = sqrt_rational(-disc)
        if r is not None:
            x = GaussianRational(Fraction(a - d), r) / GaussianRational(2 * Fraction(b))
            return _finish(A, x)
        x = (complex(float(a - d)) + 1j * math.sqrt(-disc)) / (2 * float(b))
        return _finish(A.map(complex), x)
    if isinstance(disc, complex) and disc.imag != 0:
        if backend == "real":
            raise PreconditionViolation("real backend needs real entries")
        x = (complex(a - d) + cmath.sqrt(disc)) / (2 * b)
        return _finish(A, x)
    disc = disc.real if isinstance(disc, complex) else disc
    if disc < 0:
        if backend == "real":
            raise NoRealRoot("no real root: discriminant is negative", discriminant=float(disc))
        x = (complex(a - d) + 1j * math.sqrt(-disc)) / (2 * b)
        return _finish(A.map(complex), x)
    return _finish(A, (a - d + math.sqrt(disc)) / (2 * b))


def _finish(A: Mat2, x):
    return x, conjugate_by_shear(A, x)
