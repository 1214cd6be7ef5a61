"""Exhaustive enumeration of generators by action and grading.

The search runs depth-first over (startPair, endPair, slope-increasing
non-vertical direction multisets, vertical multiplicities).  Candidate
directions come from a Stern-Brocot traversal cut off at the action budget;
descendant mediants never get shorter, so the cutoff loses nothing.  Branches
are pruned on partial action and, when a grading cap is given, on a monotone
lower bound for the final grading.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import combinations
from math import sqrt

from .diff import differential
from .paths import (
    EdgeGroup,
    KLatticePath,
    action,
    build_path,
    format_path,
    grading,
    parse_path,
    validate,
)

_TOL = 1e-9


@dataclass(frozen=True)
class ComplexSlice:
    """All valid generators with action <= action_bound, grouped by grading."""

    action_bound: float
    per_degree: dict

    def degrees(self):
        return sorted(self.per_degree)

    def generators(self, degree: int):
        return self.per_degree.get(degree, ())

    def all_generators(self):
        for k in self.degrees():
            yield from self.per_degree[k]

    def count(self) -> int:
        return sum(len(v) for v in self.per_degree.values())


@dataclass(frozen=True)
class BitMatrix:
    """GF(2) matrix of the boundary map, columns stored as int bitsets."""

    rows: tuple
    cols: tuple
    columns: tuple

    @property
    def shape(self):
        return (len(self.rows), len(self.cols))


def _directions(cap: float):
    """Primitive non-vertical directions with norm <= cap, in slope order."""
    if cap < 1:
        return []
    positive = []
    stack = [((1, 0), (0, 1))]
    while stack:
        left, right = stack.pop()
        q, p = left[0] + right[0], left[1] + right[1]
        if q * q + p * p <= cap * cap:
            positive.append((q, p))
            stack.append((left, (q, p)))
            stack.append(((q, p), right))
    positive.sort(key=lambda d: (d[1] / d[0]))
    negative = [(q, -p) for q, p in reversed(positive)]
    return negative + [(1, 0)] + positive


def build_generator(sp, ep, m, n, chosen, marked):
    """Assemble a path from raw scan data (marked = h-flagged class indexes)."""
    groups = [
        EdgeGroup(q, p, t - 1, True) if i in marked else EdgeGroup(q, p, t, False)
        for i, (q, p, t) in enumerate(chosen)
    ]
    return build_path(sp == 1, ep == 1, m, n, groups)


_NO_MARKS = frozenset()


def scan_generators(max_action: float, emit, max_grading=None,
                    h_free: bool = False):
    """Core DFS over valid generators within the bounds.

    Calls emit(sp, ep, m, n, chosen, marked, grading, total_action) for every
    generator; chosen is the non-vertical class list [(q, p, mult)...] and
    marked the set of h-flagged positions.  Callers build paths on demand via
    build_generator.
    """
    if max_action < 0:
        return
    dir_cap = max_action
    if max_grading is not None:
        # a class (q,p) with p != 0 forces grading >= q|p| >= norm/sqrt(2)
        dir_cap = min(dir_cap, 1.5 * max(max_grading, 1) + 1.5)
    dirs = _directions(dir_cap)
    norms = [sqrt(q * q + p * p) for q, p in dirs]
    ndirs = len(dirs)
    budget = max_action + _TOL

    def close(sp, ep, chosen, used, x, sum_tp, sum_t, inner2a):
        if (x + sp + ep) % 2 != 0:
            return
        shift = sp - ep - sum_tp
        m = max(0, -shift)
        while True:
            n = m + shift
            total = used + m + n
            if total > budget:
                return
            skeleton_i = inner2a + (sp + ep + m + n) * x + (m + n + sum_t)
            if max_grading is not None and skeleton_i - len(chosen) > max_grading:
                return
            if h_free:
                if max_grading is None or skeleton_i <= max_grading:
                    emit(sp, ep, m, n, chosen, _NO_MARKS, skeleton_i, total)
            else:
                for r in range(len(chosen) + 1):
                    if max_grading is not None and skeleton_i - r > max_grading:
                        continue
                    for marked in combinations(range(len(chosen)), r):
                        emit(sp, ep, m, n, chosen, frozenset(marked),
                             skeleton_i - r, total)
            m += 1

    def rec(sp, ep, idx, chosen, used, px, py, sum_t, inner2a):
        close(sp, ep, chosen, used, px, py, sum_t, inner2a)
        if used + 1.0 > budget:
            return
        for i in range(idx, ndirs):
            q, p = dirs[i]
            norm = norms[i]
            t = 1
            while used + t * norm <= budget:
                add2a = (px * p - py * q) * t
                lower = inner2a + add2a + sum_t + t - len(chosen) - 1
                if max_grading is not None and lower > max_grading:
                    break
                chosen.append((q, p, t))
                rec(sp, ep, i + 1, chosen, used + t * norm,
                    px + t * q, py + t * p, sum_t + t, inner2a + add2a)
                chosen.pop()
                t += 1

    for sp in (0, 1):
        for ep in (0, 1):
            if sp + ep <= budget:
                rec(sp, ep, 0, [], float(sp + ep), 0, 0, 0, 0)


def generators_up_to_action(max_action: float, max_grading=None,
                            h_free: bool = False) -> ComplexSlice:
    """Complete canonical slice of the complex below an action bound."""
    per_degree = {}

    def emit(sp, ep, m, n, chosen, marked, deg, total):
        per_degree.setdefault(deg, []).append(
            build_generator(sp, ep, m, n, chosen, marked))

    scan_generators(max_action, emit, max_grading, h_free)
    for k in per_degree:
        per_degree[k] = tuple(sorted(per_degree[k], key=format_path))
    return ComplexSlice(float(max_action), per_degree)


def generators_of_grading(k: int, max_action: float) -> tuple:
    """All generators of one grading within the action bound."""
    return generators_up_to_action(max_action, max_grading=k).generators(k)


def boundary_matrix(k: int, max_action: float) -> BitMatrix:
    """Matrix of the differential from grading k to k-1 within the slice."""
    sl = generators_up_to_action(max_action, max_grading=k)
    rows = sl.generators(k - 1)
    cols = sl.generators(k)
    index = {p: i for i, p in enumerate(rows)}
    columns = []
    for col in cols:
        bits = 0
        for term in differential(col):
            if term not in index:
                raise AssertionError(
                    "differential left the action slice: %s -> %s"
                    % (format_path(col), format_path(term)))
            bits |= 1 << index[term]
        columns.append(bits)
    return BitMatrix(rows, cols, tuple(columns))


# ---------------------------------------------------------------------------
# Cache files

_CACHE_VERSION = "kech-cache v1"


def save_slice(sl: ComplexSlice, file_path) -> None:
    """Write a slice to the versioned one-spec-per-line cache format."""
    lines = ["%s L=%r" % (_CACHE_VERSION, sl.action_bound)]
    lines.extend(format_path(p) for p in sl.all_generators())
    with open(file_path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_slice(file_path, max_action: float):
    """Load a cached slice; None (with a warning) on any mismatch."""
    try:
        with open(file_path, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError:
        return None
    try:
        if not lines:
            raise ValueError("empty cache file")
        header = lines[0]
        prefix = _CACHE_VERSION + " L="
        if not header.startswith(prefix):
            raise ValueError("bad cache header")
        if float(header[len(prefix):]) != float(max_action):
            raise ValueError("cache action bound mismatch")
        per_degree = {}
        for line in lines[1:]:
            path = parse_path(line)
            validate(path)
            if not action(path) <= max_action + _TOL:
                raise ValueError("cached generator exceeds action bound")
            per_degree.setdefault(grading(path), []).append(path)
        for k in per_degree:
            per_degree[k] = tuple(sorted(per_degree[k], key=format_path))
        return ComplexSlice(float(max_action), per_degree)
    except (ValueError, KeyError) as exc:
        print("warning: ignoring cache %s (%s)" % (file_path, exc),
              file=sys.stderr)
        return None
