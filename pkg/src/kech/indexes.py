"""Index bookkeeping for orbit multisets and holomorphic-curve data.

The integer grading of a generator decomposes as a relative first Chern term,
a self-intersection term, and a sum of Conley-Zehnder indices.  This module
evaluates each piece separately so the decomposition can be cross-checked
against the geometric grading, plus the Fredholm index of curve data, the
secondary index used by the embedding obstruction, and the multiplicity
partitions attached to orbit ends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .paths import (
    EMPTY_PATH,
    KLatticePath,
    PathSemanticsError,
    h_count,
    pair_count,
    total_class,
    validate,
)

ELLIPTIC = "elliptic"
POSITIVE_HYPERBOLIC = "positive_hyperbolic"
NEGATIVE_HYPERBOLIC = "negative_hyperbolic"
_KINDS = (ELLIPTIC, POSITIVE_HYPERBOLIC, NEGATIVE_HYPERBOLIC)


def conley_zehnder(kind: str, k: int) -> int:
    """Index of the k-th iterate: elliptic 1, pos.hyp 0, neg.hyp -k."""
    if k < 1:
        raise ValueError("iterate k must be >= 1")
    if kind == ELLIPTIC:
        return 1
    if kind == POSITIVE_HYPERBOLIC:
        return 0
    if kind == NEGATIVE_HYPERBOLIC:
        return -k
    raise ValueError(f"unknown orbit kind {kind!r}; expected one of {_KINDS}")


def negative_hyperbolic_count(path: KLatticePath) -> int:
    """Number of negative hyperbolic orbits (two per half-arrow pair)."""
    return 2 * pair_count(path)


def positive_hyperbolic_count(path: KLatticePath) -> int:
    return h_count(path)


def elliptic_factor_count(path: KLatticePath) -> int:
    """Number of distinct elliptic orbit factors."""
    return sum(1 for g in path.groups if g.e_mult >= 1)


def relative_chern(alpha: KLatticePath, beta: KLatticePath) -> int:
    """(n_alpha - n_beta)/2 for the canonical relative class."""
    if total_class(alpha) != total_class(beta):
        raise PathSemanticsError("total classes differ; no relative class")
    return (negative_hyperbolic_count(alpha) - negative_hyperbolic_count(beta)) // 2


def _cross_sum(path: KLatticePath) -> int:
    """Sum of pairwise cross products over slope-sorted arrow copies.

    Half-arrow pairs contribute one unit vertical copy each.  For a valid path
    this equals the doubled area between path and axis.
    """
    entries = []  # (q, p, copies), already in slope order: pair verticals are
    # parallel to the adjacent vertical runs, so their placement is free
    if path.start_pair:
        entries.append((0, -1, 1))
    for g in path.groups:
        entries.append((g.q, g.p, g.mult))
    if path.end_pair:
        entries.append((0, 1, 1))
    px = py = 0
    total = 0
    for q, p, t in entries:
        total += (px * p - py * q) * t
        px += q * t
        py += p * t
    return total


def q_tau(path: KLatticePath) -> int:
    """Self-intersection term: doubled area plus one per half-arrow pair."""
    return _cross_sum(path) + pair_count(path)


def cz_total(path: KLatticePath) -> int:
    """Sum of conley_zehnder over all iterates of all orbits."""
    total = 0
    for g in path.groups:
        total += sum(conley_zehnder(ELLIPTIC, k) for k in range(1, g.e_mult + 1))
        if g.h_flag:
            total += conley_zehnder(POSITIVE_HYPERBOLIC, 1)
    total += 2 * pair_count(path) * conley_zehnder(NEGATIVE_HYPERBOLIC, 1)
    return total


def ech_index_decomposed(path: KLatticePath) -> int:
    """relative_chern + q_tau + total Conley-Zehnder; equals grading."""
    validate(path)
    return relative_chern(path, EMPTY_PATH) + q_tau(path) + cz_total(path)


@dataclass(frozen=True)
class CurveData:
    """Topological data of a curve between two orbit multisets."""

    genus: int
    alpha: KLatticePath
    beta: KLatticePath


def fredholm_index(c: CurveData) -> int:
    """2(g + e(alpha) - 1) + n_alpha + n_beta + h(alpha) + h(beta)."""
    return (
        2 * (c.genus + elliptic_factor_count(c.alpha) - 1)
        + negative_hyperbolic_count(c.alpha)
        + negative_hyperbolic_count(c.beta)
        + positive_hyperbolic_count(c.alpha)
        + positive_hyperbolic_count(c.beta)
    )


def j0_index(gen, side: str) -> int:
    """Secondary index: kpath I - e; convex I - 2(x+y) - e."""
    if side == "kpath":
        from .paths import grading

        if not isinstance(gen, KLatticePath):
            raise TypeError("side='kpath' expects a lattice path")
        return grading(gen) - elliptic_factor_count(gen)
    if side == "convex":
        from .toric import ConvexGenerator, cg_elliptic_factor_count, cg_grading, cg_x, cg_y

        if not isinstance(gen, ConvexGenerator):
            raise TypeError("side='convex' expects a convex generator")
        return cg_grading(gen) - 2 * (cg_x(gen) + cg_y(gen)) - cg_elliptic_factor_count(gen)
    raise ValueError("side must be 'kpath' or 'convex'")


def partitions(kind: str, theta, m: int, sign: str = "+", tol: float = 1e-9) -> tuple:
    """Multiplicity partition attached to an orbit end.

    Positive hyperbolic: all ones.  Negative hyperbolic: twos with a trailing
    one when m is odd.  Elliptic: horizontal displacements of the extremal
    lattice path pinched against the line y = theta*x - maximal concave below
    it for sign '+', minimal convex above it for sign '-'.
    """
    if m < 1:
        raise ValueError("multiplicity m must be >= 1")
    if kind == POSITIVE_HYPERBOLIC:
        return (1,) * m
    if kind == NEGATIVE_HYPERBOLIC:
        return (2,) * (m // 2) + ((1,) if m % 2 else ())
    if kind != ELLIPTIC:
        raise ValueError(f"unknown orbit kind {kind!r}; expected one of {_KINDS}")

    theta = float(theta)
    for d in range(1, m + 1):
        if abs(d * theta - round(d * theta)) <= tol:
            raise ValueError(
                f"theta={theta} is rational to tolerance (denominator {d} <= {m})"
            )
    if sign in ("+", "+1", 1):
        pts = [(i, math.floor(i * theta)) for i in range(m + 1)]
        hull = _hull(pts, upper=True)
    elif sign in ("-", "-1", -1):
        pts = [(i, math.ceil(i * theta)) for i in range(m + 1)]
        hull = _hull(pts, upper=False)
    else:
        raise ValueError("sign must be '+' or '-'")
    displacements = [b[0] - a[0] for a, b in zip(hull, hull[1:])]
    return tuple(sorted(displacements, reverse=True))


def _hull(pts, upper: bool):
    """Monotone-chain hull of x-sorted points; collinear points merged."""
    stack = []
    for pt in pts:
        while len(stack) >= 2:
            (x1, y1), (x2, y2) = stack[-2], stack[-1]
            cross = (x2 - x1) * (pt[1] - y2) - (y2 - y1) * (pt[0] - x2)
            if (cross >= 0) if upper else (cross <= 0):
                stack.pop()
            else:
                break
        stack.append(pt)
    return stack
