"""Vertices of the d-regular tree as color strings.

With a legal edge coloring by ``1..d`` every vertex is reached from the base
vertex ``v0`` by a unique non-backtracking path, recorded as the string of its
edge colors (no two consecutive colors equal).  ``v0`` is the empty string.
Equivalently the tree is the Cayley graph of the free product of ``d`` copies
of ``Z/2``, and ``mul`` is the group product; left multiplication is a
color-preserving automorphism.
"""
from __future__ import annotations

from functools import lru_cache

ROOT = ""


def colors(d: int) -> str:
    if not 2 <= d <= 9:
        raise ValueError("valence must be between 2 and 9")
    return "".join(str(c) for c in range(1, d + 1))


def is_address(w: str, d: int) -> bool:
    cs = colors(d)
    return all(ch in cs for ch in w) and all(a != b for a, b in zip(w, w[1:]))


def check_address(w: str, d: int) -> str:
    if not is_address(w, d):
        raise ValueError(f"{w!r} is not a vertex address for valence {d}")
    return w


def mul(a: str, b: str) -> str:
    """Reduced concatenation: cancel ``cc`` pairs at the seam."""
    i = 0
    n = min(len(a), len(b))
    while i < n and a[len(a) - 1 - i] == b[i]:
        i += 1
    return a[: len(a) - i] + b[i:]


def inv(a: str) -> str:
    return a[::-1]


def step(w: str, c: str) -> str:
    """Neighbor of ``w`` across the edge of color ``c``."""
    return w[:-1] if w and w[-1] == c else w + c


def neighbors(w: str, d: int) -> list[str]:
    return [step(w, c) for c in colors(d)]


def children(w: str, d: int) -> list[str]:
    """Neighbors farther from ``v0``."""
    return [w + c for c in colors(d) if not w or c != w[-1]]


def edge_color(x: str, y: str) -> str:
    if len(y) == len(x) + 1 and y.startswith(x):
        return y[-1]
    if len(x) == len(y) + 1 and x.startswith(y):
        return x[-1]
    raise ValueError(f"{x!r} and {y!r} are not adjacent")


def dist(x: str, y: str) -> int:
    return len(mul(inv(x), y))


def geodesic(x: str, y: str) -> list[str]:
    path = [x]
    for c in mul(inv(x), y):
        path.append(step(path[-1], c))
    return path


@lru_cache(maxsize=None)
def _rel_ball(d: int, r: int) -> tuple[str, ...]:
    out = [ROOT]
    frontier = [ROOT]
    for _ in range(r):
        frontier = [w for x in frontier for w in children(x, d)]
        out.extend(frontier)
    return tuple(out)


def ball(center: str, r: int, d: int) -> list[str]:
    """``B(center, r)`` ordered by distance from ``center``, then by relative path."""
    if center == ROOT:
        return list(_rel_ball(d, r))
    return [mul(center, w) for w in _rel_ball(d, r)]


def sphere(center: str, r: int, d: int) -> list[str]:
    if r == 0:
        return [center]
    rel = [w for w in _rel_ball(d, r) if len(w) == r]
    return [mul(center, w) for w in rel]


def sphere_size(r: int, d: int) -> int:
    return 1 if r == 0 else d * (d - 1) ** (r - 1)


# digit coordinates about a center: the first step is one of d colors (digit
# 0..d-1); every later step is one of the d-1 colors other than the inward
# one, numbered in increasing order (digit 0..d-2)


def psi(inward: str, c: str) -> int:
    """Index of color ``c`` among the colors other than ``inward``, ascending."""
    k = int(c) - 1
    return k - 1 if c > inward else k


def psi_inv(inward: str, k: int) -> str:
    c = k + 1
    if c >= int(inward):
        c += 1
    return str(c)


def to_digits(w: str) -> tuple[int, ...]:
    if not w:
        return ()
    out = [int(w[0]) - 1]
    for prev, c in zip(w, w[1:]):
        out.append(psi(prev, c))
    return tuple(out)


def from_digits(x) -> str:
    if not x:
        return ROOT
    w = [str(x[0] + 1)]
    for k in x[1:]:
        w.append(psi_inv(w[-1], k))
    return "".join(w)
