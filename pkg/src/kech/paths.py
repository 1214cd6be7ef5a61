"""Convex sub-axis lattice paths modeling closed-geodesic orbit sets.

A generator is a convex piecewise-linear lattice path from (0,0) to (x,0),
staying weakly below the horizontal axis, whose edges are grouped into
direction classes of primitive integer vectors with strictly increasing slope.
Non-vertical classes carry an elliptic multiplicity and at most one hyperbolic
flag; the two vertical directions are always elliptic.  Either end wall may
additionally carry a half-arrow pair: a pair of hyperbolic half-orbits jointly
occupying one unit of vertical travel at the start ( ``H-`` ) or end ( ``H+`` ).

The text format is ``"0"`` for the empty generator, otherwise semicolon-joined
items: optional leading ``H-``, orbit items ``e(q,p)^m`` / ``h(q,p)`` in slope
order, optional trailing ``H+``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class PathError(ValueError):
    """Base error for malformed path specs or invalid paths."""


class PathSyntaxError(PathError):
    """Text does not conform to the path grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


class PathSemanticsError(PathError):
    """Text parses but violates a structural invariant."""


@dataclass(frozen=True)
class EdgeGroup:
    """All parallel edges of one primitive direction (q, p)."""

    q: int
    p: int
    e_mult: int
    h_flag: bool

    @property
    def mult(self) -> int:
        return self.e_mult + (1 if self.h_flag else 0)

    @property
    def vertical(self) -> bool:
        return self.q == 0


@dataclass(frozen=True)
class H1Class:
    """First-homology class with free part n and two 2-torsion bits a, b."""

    n: int
    a: int
    b: int

    def __add__(self, other: "H1Class") -> "H1Class":
        return H1Class(self.n + other.n, (self.a + other.a) % 2, (self.b + other.b) % 2)

    @property
    def is_zero(self) -> bool:
        return self.n == 0 and self.a == 0 and self.b == 0

    def __str__(self) -> str:
        return f"({self.n},{self.a},{self.b})"


ZERO_CLASS = H1Class(0, 0, 0)

# Per-orbit classes.  Toric direction (q,p) maps to (2p, 0, q mod 2); the four
# lone half-arrows and the two vertical full arrows have the fixed values below.
_HALF_ARROW_CLASSES = {
    "h1-": H1Class(-1, 1, 0),
    "h2-": H1Class(-1, 1, 1),
    "h1+": H1Class(1, 0, 0),
    "h2+": H1Class(1, 0, 1),
}
PAIR_MINUS_CLASS = _HALF_ARROW_CLASSES["h1-"] + _HALF_ARROW_CLASSES["h2-"]
PAIR_PLUS_CLASS = _HALF_ARROW_CLASSES["h1+"] + _HALF_ARROW_CLASSES["h2+"]


def direction_class(q: int, p: int) -> H1Class:
    return H1Class(2 * p, 0, q % 2)


def orbit_class(atom) -> H1Class:
    """Class of a single orbit atom.

    Atoms: ``("e", q, p)`` / ``("h", q, p)`` for full arrows (verticals via
    q=0, p=+-1), or the strings ``"h1-"``, ``"h2-"``, ``"h1+"``, ``"h2+"`` for
    lone half-arrows.
    """
    if isinstance(atom, str):
        try:
            return _HALF_ARROW_CLASSES[atom]
        except KeyError:
            raise PathSemanticsError(f"unknown orbit atom {atom!r}") from None
    kind, q, p = atom
    if kind not in ("e", "h"):
        raise PathSemanticsError(f"unknown orbit atom {atom!r}")
    return direction_class(q, p)


_SlopeKey = tuple  # (-1, 0) < (0, Fraction) < (1, 0)


def slope_key(q: int, p: int) -> _SlopeKey:
    if q == 0:
        return (-1, Fraction(0)) if p < 0 else (1, Fraction(0))
    return (0, Fraction(p, q))


@dataclass(frozen=True)
class KLatticePath:
    """Canonical convex sub-axis path (possibly with half-arrow pairs)."""

    start_pair: bool
    end_pair: bool
    groups: tuple  # tuple[EdgeGroup, ...] in strictly increasing slope order

    def __str__(self) -> str:
        return format_path(self)

    def __lt__(self, other: "KLatticePath") -> bool:
        return format_path(self) < format_path(other)


EMPTY_PATH = KLatticePath(False, False, ())


def build_path(start_pair: bool, end_pair: bool, down: int, up: int, middle) -> KLatticePath:
    """Assemble a path from wall runs and non-vertical groups (slope-sorted)."""
    groups = []
    if down:
        groups.append(EdgeGroup(0, -1, down, False))
    groups.extend(middle)
    if up:
        groups.append(EdgeGroup(0, 1, up, False))
    return KLatticePath(start_pair, end_pair, tuple(groups))


def down_run(path: KLatticePath) -> int:
    for g in path.groups:
        if g.vertical and g.p < 0:
            return g.mult
    return 0


def up_run(path: KLatticePath) -> int:
    for g in path.groups:
        if g.vertical and g.p > 0:
            return g.mult
    return 0


def middle_groups(path: KLatticePath):
    return tuple(g for g in path.groups if not g.vertical)


def x_width(path: KLatticePath) -> int:
    return sum(g.q * g.mult for g in path.groups)


def arrow_count(path: KLatticePath) -> int:
    """Total full-arrow multiplicity m (half-arrow pairs excluded)."""
    return sum(g.mult for g in path.groups)


def h_count(path: KLatticePath) -> int:
    return sum(1 for g in path.groups if g.h_flag)


def pair_count(path: KLatticePath) -> int:
    return (1 if path.start_pair else 0) + (1 if path.end_pair else 0)


# ---------------------------------------------------------------------------
# Parsing / formatting

_ITEM_RE = re.compile(r"(e|h)\((-?\d+),(-?\d+)\)(?:\^(\d+))?\Z")


def parse_path(text: str) -> KLatticePath:
    """Parse and fully validate a path spec string."""
    stripped = text.strip()
    if stripped == "0":
        return EMPTY_PATH
    if not stripped:
        raise PathSyntaxError("empty spec", 0)

    start_pair = False
    end_pair = False
    groups = []  # mutable [q, p, e_mult, h_flag]
    last_key = None

    pos = 0
    raw_items = stripped.split(";")
    for idx, raw in enumerate(raw_items):
        item = raw.strip()
        item_pos = text.find(raw, pos)
        pos = item_pos + len(raw)
        if not item:
            raise PathSyntaxError("empty item", item_pos)
        if item == "H-":
            if idx != 0:
                raise PathSemanticsError("H- allowed only as the first item")
            start_pair = True
            continue
        if item == "H+":
            if idx != len(raw_items) - 1:
                raise PathSemanticsError("H+ allowed only as the last item")
            end_pair = True
            continue
        m = _ITEM_RE.match(item)
        if m is None:
            raise PathSyntaxError(f"malformed item {item!r}", item_pos)
        label, q, p = m.group(1), int(m.group(2)), int(m.group(3))
        mult = int(m.group(4)) if m.group(4) is not None else 1
        if mult < 1:
            raise PathSyntaxError("exponent must be >= 1", item_pos)
        if q < 0:
            raise PathSemanticsError(f"negative horizontal component in ({q},{p})")
        if q == 0 and p == 0:
            raise PathSemanticsError("zero direction (0,0)")
        if gcd(q, abs(p)) != 1:
            raise PathSemanticsError(f"non-primitive direction ({q},{p})")
        if label == "h":
            if q == 0:
                raise PathSemanticsError("vertical edges cannot be labeled h")
            if mult != 1:
                raise PathSemanticsError("repeated h on one direction")
        key = slope_key(q, p)
        if last_key is not None and key < last_key:
            raise PathSemanticsError(
                f"non-convex slope order at ({q},{p})"
            )
        if groups and groups[-1][0] == q and groups[-1][1] == p:
            g = groups[-1]
            if label == "h":
                if g[3]:
                    raise PathSemanticsError("repeated h on one direction")
                g[3] = True
            else:
                g[2] += mult
        else:
            groups.append([q, p, mult if label == "e" else 0, label == "h"])
        last_key = key

    path = KLatticePath(
        start_pair, end_pair, tuple(EdgeGroup(q, p, e, h) for q, p, e, h in groups)
    )
    validate(path)
    return path


def format_path(path: KLatticePath) -> str:
    """Canonical spec string (h before e within a direction class)."""
    items = []
    if path.start_pair:
        items.append("H-")
    for g in path.groups:
        if g.h_flag:
            items.append(f"h({g.q},{g.p})")
        if g.e_mult:
            exp = f"^{g.e_mult}" if g.e_mult > 1 else ""
            items.append(f"e({g.q},{g.p}){exp}")
    if path.end_pair:
        items.append("H+")
    if not items:
        return "0"
    return ";".join(items)


# ---------------------------------------------------------------------------
# Validation

def total_class(obj) -> H1Class:
    """Total first-homology class of a path or an iterable of orbit atoms."""
    if isinstance(obj, KLatticePath):
        total = ZERO_CLASS
        if obj.start_pair:
            total = total + PAIR_MINUS_CLASS
        if obj.end_pair:
            total = total + PAIR_PLUS_CLASS
        for g in obj.groups:
            c = direction_class(g.q, g.p)
            for _ in range(g.mult):
                total = total + c
        return total
    total = ZERO_CLASS
    for atom in obj:
        total = total + orbit_class(atom)
    return total


def validate(path: KLatticePath) -> str:
    """Check every invariant; return the type tag (I/II/III/IV/empty)."""
    last_key = None
    seen_up_vertical = False
    for g in path.groups:
        if g.q < 0:
            raise PathSemanticsError(f"negative horizontal component in ({g.q},{g.p})")
        if g.q == 0 and g.p == 0:
            raise PathSemanticsError("zero direction (0,0)")
        if gcd(g.q, abs(g.p)) != 1:
            raise PathSemanticsError(f"non-primitive direction ({g.q},{g.p})")
        if g.e_mult < 0 or g.mult < 1:
            raise PathSemanticsError(f"empty edge group on ({g.q},{g.p})")
        if g.vertical and g.h_flag:
            raise PathSemanticsError("vertical edges cannot be labeled h")
        key = slope_key(g.q, g.p)
        if last_key is not None and key <= last_key:
            raise PathSemanticsError("non-convex slope order")
        last_key = key
        if g.vertical and g.p > 0:
            seen_up_vertical = True
        elif seen_up_vertical:
            raise PathSemanticsError("non-convex slope order")

    drop = (1 if path.start_pair else 0) + sum(
        g.p * g.mult for g in path.groups if g.p < 0
    ) * -1
    rise = (1 if path.end_pair else 0) + sum(
        g.p * g.mult for g in path.groups if g.p > 0
    )
    if drop != rise:
        raise PathSemanticsError(
            f"vertical displacements do not close (down {drop}, up {rise})"
        )
    cls = total_class(path)
    if not cls.is_zero:
        raise PathSemanticsError(f"nonzero total class {cls}")

    if not path.groups and not path.start_pair and not path.end_pair:
        return "empty"
    if path.start_pair and path.end_pair:
        return "IV"
    if path.start_pair:
        return "II"
    if path.end_pair:
        return "III"
    return "I"


def is_valid(path: KLatticePath) -> bool:
    try:
        validate(path)
        return True
    except PathError:
        return False


# ---------------------------------------------------------------------------
# Geometry

def vertices(path: KLatticePath):
    """Geometric vertex chain from (0,0) to (x,0), walls included."""
    pts = [(0, 0)]
    y = -((1 if path.start_pair else 0) + down_run(path))
    x = 0
    if y != 0:
        pts.append((0, y))
    for g in middle_groups(path):
        x += g.q * g.mult
        y += g.p * g.mult
        pts.append((x, y))
    top = (1 if path.end_pair else 0) + up_run(path)
    if top:
        if pts[-1] != (x, -top):
            raise PathSemanticsError("vertical displacements do not close")
        pts.append((x, 0))
    return pts


def region_points(path: KLatticePath):
    """Lattice points between the path and the axis (both included)."""
    pts = set()
    width = x_width(path)
    if width == 0:
        depth = (1 if path.start_pair else 0) + down_run(path)
        return {(0, -j) for j in range(depth + 1)}
    left = (1 if path.start_pair else 0) + down_run(path)
    right = (1 if path.end_pair else 0) + up_run(path)
    for j in range(left + 1):
        pts.add((0, -j))
    for j in range(right + 1):
        pts.add((width, -j))
    cx, cy = 0, -left
    for g in middle_groups(path):
        span = g.q * g.mult
        for c in range(cx, cx + span + 1):
            # floor of the path height at column c along this edge
            num = cy * g.q + (c - cx) * g.p
            bottom = -((-num) // g.q)  # ceil(num / q)
            for yy in range(bottom, 1):
                pts.add((c, yy))
        cx += span
        cy += g.p * g.mult
    return pts


def _shoelace2(pts) -> int:
    total = 0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        total += x1 * y2 - x2 * y1
    return abs(total)


def doubled_area(path: KLatticePath) -> int:
    return _shoelace2(vertices(path))


def grading(path: KLatticePath) -> int:
    """Integer grading 2*Area + m - h (area between path and axis)."""
    return doubled_area(path) + arrow_count(path) - h_count(path)


def grading_lattice(path: KLatticePath) -> int:
    """Same grading via lattice-point count: 2(L-1) - n/2 - x - h."""
    lattice = len(region_points(path))
    n_half = pair_count(path)  # n/2 where n counts half-arrows
    return 2 * (lattice - 1) - n_half - x_width(path) - h_count(path)


def action(path: KLatticePath) -> float:
    """Total euclidean edge length; each half-arrow pair contributes 1."""
    total = float(pair_count(path))
    for g in path.groups:
        total += g.mult * math.hypot(g.q, g.p)
    return total
