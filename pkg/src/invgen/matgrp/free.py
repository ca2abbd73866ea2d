"""Randomized search for a conjugate that extends a free tuple."""
from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction

from ..config import budget
from ..errors import PreconditionViolation, TrialsExhausted
from ..words import FreenessCertificate, format_word, free_up_to, probe_order
from .mat2 import Mat2, mat_ops


def random_sl2_rational(rng: random.Random, height: int = 5) -> Mat2:
    """Integer matrix with entries in ``[-height, height]``, first row divided by the determinant."""
    while True:
        a, b, c, d = (rng.randint(-height, height) for _ in range(4))
        det = a * d - b * c
        if det != 0:
            break
    if det == 1:
        return Mat2(a, b, c, d)
    s = Fraction(1, det)
    return Mat2(a * s, b * s, c, d)


def extend_free_tuple(c_list, c: Mat2, L: int, trials: int | None = None, seed: int = 0,
                      height: int = 5, projective: bool = True, cap: int | None = None):
    """Find ``g`` in SL2(Q) such that ``c_list + (g^-1 c g,)`` has no relation up to length ``L``.

    Identity tests are projective by default (``+-I`` count as trivial).
    Returns ``(g, certificate)`` for the first successful trial; raises
    :class:`TrialsExhausted` naming the most frequent relation otherwise.
    """
    c_list = list(c_list)
    trials = budget().trials if trials is None else trials
    ops = mat_ops(projective=projective)
    if ops.is_identity(c):
        raise PreconditionViolation("target class is trivial", projective=projective)
    if any(not m.is_exact() for m in c_list + [c]):
        raise PreconditionViolation("entries must be exact rationals")
    if c_list:
        base = free_up_to(c_list, L, ops, cap=cap, tuple_id="c_list")
        if not base.is_free:
            raise PreconditionViolation(
                "c_list already has a relation", relation=format_word(base.relation)
            )
    orders = [probe_order(m, ops) for m in c_list]
    c_order = probe_order(c, ops)
    rng = random.Random(seed)
    failures: Counter = Counter()
    for k in range(trials):
        g = random_sl2_rational(rng, height)
        h = g.inverse() * c * g
        cert = free_up_to(c_list + [h], L, ops, orders=orders + [c_order], cap=cap,
                          tuple_id=f"trial-{k}")
        if cert.is_free:
            return g, cert
        failures[format_word(cert.relation)] += 1
    common, count = failures.most_common(1)[0]
    raise TrialsExhausted(f"no success in {trials} trials", relation=common, count=count, trials=trials)


def certificate_json(g: Mat2, cert: FreenessCertificate) -> dict:
    return {"g": g.to_json(), "certificate": cert.to_json()}
