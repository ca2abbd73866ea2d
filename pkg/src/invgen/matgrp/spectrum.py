"""Eigenvalue spectra of the words in a finite set of 2x2 matrices."""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction

from ..config import budget
from ..errors import BudgetExceeded
from ..words import TupleSpec, count_reduced_words, walk_word_values
from .mat2 import Mat2, is_exact, mat_ops, sqrt_rational

ROUND = 10
UNIT_TOL = 1e-9


@dataclass
class SpectrumReport:
    """Eigenvalues sorted into nonzero reals, the unit circle, and the rest.

    Each eigenvalue lands in exactly one bucket; ``+-1`` count as real.
    """

    real_values: set = field(default_factory=set)
    unit_values: set = field(default_factory=set)
    other: set = field(default_factory=set)

    def circle_values(self) -> set:
        """Every eigenvalue of modulus one, including real ``+-1``."""
        return self.unit_values | {complex(x) for x in self.real_values if abs(x) == 1}

    def to_json(self) -> dict:
        def real(x):
            if isinstance(x, Fraction):
                return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
            return x

        return {
            "real": [real(x) for x in sorted(self.real_values)],
            "unit": [{"re": z.real, "im": z.imag} for z in sorted(self.unit_values, key=lambda z: (z.real, z.imag))],
            "other": [{"re": z.real, "im": z.imag} for z in sorted(self.other, key=lambda z: (z.real, z.imag))],
        }


def _canon_real(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    r = round(float(x), ROUND)
    return int(r) if r == int(r) and abs(r) < 2**53 else r


def _canon_complex(z: complex) -> complex:
    return complex(round(z.real, ROUND) + 0.0, round(z.imag, ROUND) + 0.0)


def eigenvalues(m: Mat2):
    """Both eigenvalues from trace and determinant.

    Returns ``("real", [x, y])`` or ``("complex", [z, conj z])``; real roots
    are exact ``Fraction`` when the discriminant is a rational square.
    """
    t, D = m.trace(), m.det()
    disc = t * t - 4 * D
    if m.is_exact():
        if disc >= 0:
            r = sqrt_rational(disc)
            if r is not None:
                t = Fraction(t)
                return "real", [(t + r) / 2, (t - r) / 2]
            r = float(disc) ** 0.5
            return "real", [(float(t) + r) / 2, (float(t) - r) / 2]
        z = complex(float(t) / 2, float(-disc) ** 0.5 / 2)
        return "complex", [z, z.conjugate()]
    t, D = complex(t), complex(D)
    if t.imag == 0 and D.imag == 0:
        dr = (t * t - 4 * D).real
        if dr >= 0:
            r = dr ** 0.5
            return "real", [(t.real + r) / 2, (t.real - r) / 2]
        z = complex(t.real / 2, (-dr) ** 0.5 / 2)
        return "complex", [z, z.conjugate()]
    r = cmath.sqrt(t * t - 4 * D)
    return "complex", [(t + r) / 2, (t - r) / 2]


def classify_eigenvalues(m: Mat2, report: SpectrumReport) -> None:
    kind, vals = eigenvalues(m)
    if kind == "real":
        for x in vals:
            if x == 0:
                report.other.add(0j)
            else:
                report.real_values.add(_canon_real(x))
        return
    exact_unit = m.is_exact() and m.det() == 1
    for z in vals:
        if abs(z.imag) <= UNIT_TOL * max(1.0, abs(z)) and not m.is_exact():
            report.real_values.add(_canon_real(z.real))
        elif exact_unit or abs(abs(z) - 1) <= UNIT_TOL:
            report.unit_values.add(_canon_complex(z))
        else:
            report.other.add(_canon_complex(z))


def spectrum_of_words(generators, L: int, include_identity: bool = True, cap: int | None = None) -> SpectrumReport:
    """Spectrum of every freely reduced word of length at most ``L``.

    The empty word (the identity) is included unless ``include_identity`` is
    false.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    gens = list(generators)
    spec = TupleSpec.infinite(len(gens))
    cap = budget().words if cap is None else cap
    total = count_reduced_words(spec, L)
    if total > cap:
        raise BudgetExceeded(f"{total} words exceed the cap {cap}", words=total, cap=cap)
    report = SpectrumReport()
    exact = all(g.is_exact() for g in gens)
    ops = mat_ops(one=1 if exact else 1.0)
    if include_identity:
        classify_eigenvalues(ops.identity, report)
    for _, m in walk_word_values(gens, L, ops, spec):
        classify_eigenvalues(m, report)
    return report
