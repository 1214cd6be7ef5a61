"""GF(2) linear algebra and graded homology of the filtered complex."""

from __future__ import annotations

from .census import BitMatrix, boundary_matrix, generators_up_to_action
from .diff import differential
from .paths import format_path


def gf2_rank(matrix: BitMatrix) -> int:
    """Rank over GF(2) by column elimination in canonical column order."""
    pivots = {}
    rank = 0
    for vec in matrix.columns:
        while vec:
            top = vec.bit_length() - 1
            if top in pivots:
                vec ^= pivots[top]
            else:
                pivots[top] = vec
                rank += 1
                break
    return rank


def d_squared_report(max_action: float):
    """Generators whose boundary fails to die under a second boundary.

    Returns a list of (spec, surviving term specs) pairs; empty means the
    differential squares to zero on the whole slice.
    """
    sl = generators_up_to_action(max_action)
    memo = {}

    def delta(path):
        if path not in memo:
            memo[path] = differential(path)
        return memo[path]

    violations = []
    for path in sl.all_generators():
        survivors = frozenset()
        for term in delta(path):
            survivors ^= frozenset(delta(term))
        if survivors:
            violations.append((
                format_path(path),
                tuple(sorted(format_path(s) for s in survivors)),
            ))
    return violations


def betti(k: int, max_action: float) -> int:
    """dim ker(boundary at grading k) - rank(boundary from grading k+1)."""
    if k < 0:
        raise ValueError("grading must be nonnegative")
    sl = generators_up_to_action(max_action, max_grading=k + 1)
    rows_k = sl.generators(k - 1)
    cols_k = sl.generators(k)
    cols_up = sl.generators(k + 1)
    index_k = {p: i for i, p in enumerate(rows_k)}
    index_up = {p: i for i, p in enumerate(cols_k)}

    def matrix(rows_index, cols):
        columns = []
        for col in cols:
            bits = 0
            for term in differential(col):
                if term not in rows_index:
                    raise AssertionError(
                        "differential left the action slice: %s -> %s"
                        % (format_path(col), format_path(term)))
                bits |= 1 << rows_index[term]
            columns.append(bits)
        return BitMatrix(tuple(rows_index), tuple(cols), tuple(columns))

    rank_down = gf2_rank(matrix(index_k, cols_k))
    rank_up = gf2_rank(matrix(index_up, cols_up))
    return (len(cols_k) - rank_down) - rank_up


def stabilized_betti(k: int, max_bound: float = 32.0):
    """Double the action bound from 4 until the dimension stops moving.

    Convergence requires the value to survive two consecutive doublings
    (a single agreement can be a finite-size coincidence).  Returns
    (stable value, first action bound of the plateau).  Raises
    RuntimeError when the configured bound is exhausted first.
    """
    memo = {}

    def at(bound):
        if bound not in memo:
            memo[bound] = betti(k, bound)
        return memo[bound]

    bound = 4.0
    while bound <= max_bound + 1e-9:
        value = at(bound)
        if at(2 * bound) == value and at(4 * bound) == value:
            return (value, bound)
        bound *= 2
    raise RuntimeError(
        "betti(%d) did not stabilize within action bound %g" % (k, max_bound))
