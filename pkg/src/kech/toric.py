"""Convex toric domains and the combinatorial embedding obstruction.

A convex generator is a labeled concave lattice path from (0, y) to (x, 0):
classes are primitive displacements (a, -b) with a, b >= 0, listed with
steepness b/a strictly increasing (horizontal first, vertical last), each
carrying an elliptic multiplicity and an optional h flag (never on the
horizontal or vertical class).  Its grading is 2(L - 1) - h where L counts
lattice points in the region enclosed by the path and the axes; its action
against a domain sums mult * support(b, a) over classes.

The obstruction pipeline matches convex generators against chain-complex
generators of equal grading through an action inequality and the point-count
inequality x + y - h/2 >= pairs + toricMult - 1.  Minimization over convex
generators is an exhaustive concave-path search with two sound prunes: the
partial lattice count can only grow, and the partial action can only grow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf

from .paths import (
    EdgeGroup,
    KLatticePath,
    action,
    build_path,
    down_run,
    format_path,
    grading,
    middle_groups,
    pair_count,
    slope_key,
    up_run,
    validate,
)

_TOL = 1e-9


# ---------------------------------------------------------------------------
# Convex generators


@dataclass(frozen=True)
class CgClass:
    """One class of parallel edges of displacement (a, -b), a, b >= 0."""

    a: int
    b: int
    e_mult: int
    h_flag: bool

    @property
    def mult(self) -> int:
        return self.e_mult + (1 if self.h_flag else 0)

    @property
    def sloped(self) -> bool:
        return self.a >= 1 and self.b >= 1


@dataclass(frozen=True)
class ConvexGenerator:
    """Concave-ordered labeled lattice path encoding a boundary generator."""

    groups: tuple

    def __str__(self) -> str:
        return format_convex_generator(self)


EMPTY_CONVEX = ConvexGenerator(())


def _steepness(a: int, b: int):
    return (1, Fraction(0)) if a == 0 else (0, Fraction(b, a))


def make_convex_generator(items) -> ConvexGenerator:
    """Validate and assemble classes given as CgClass or (a, b, eMult, h)."""
    groups = []
    for item in items:
        if not isinstance(item, CgClass):
            item = CgClass(*item)
        groups.append(item)
    last = None
    for g in groups:
        if g.a < 0 or g.b < 0 or (g.a, g.b) == (0, 0):
            raise ValueError("class displacement must be (a,-b) with a,b >= 0, nonzero")
        if gcd(g.a, g.b) != 1:
            raise ValueError("class displacement must be primitive")
        if g.e_mult < 0 or g.mult < 1:
            raise ValueError("class multiplicity must be positive")
        if g.h_flag and not g.sloped:
            raise ValueError("horizontal and vertical classes are always elliptic")
        key = _steepness(g.a, g.b)
        if last is not None and key <= last:
            raise ValueError("classes must appear in strictly increasing steepness")
        last = key
    return ConvexGenerator(tuple(groups))


def format_convex_generator(cg: ConvexGenerator) -> str:
    if not cg.groups:
        return "0"
    items = []
    for g in cg.groups:
        if g.h_flag:
            items.append("h(%d,%d)" % (g.a, g.b))
        if g.e_mult:
            items.append("e(%d,%d)%s" % (g.a, g.b,
                                         "^%d" % g.e_mult if g.e_mult > 1 else ""))
    return ";".join(items)


def cg_x(cg: ConvexGenerator) -> int:
    return sum(g.a * g.mult for g in cg.groups)


def cg_y(cg: ConvexGenerator) -> int:
    return sum(g.b * g.mult for g in cg.groups)


def cg_h_count(cg: ConvexGenerator) -> int:
    return sum(1 for g in cg.groups if g.h_flag)


def cg_elliptic_factor_count(cg: ConvexGenerator) -> int:
    return sum(1 for g in cg.groups if g.e_mult >= 1)


def _lattice_terms(classes):
    """(lattice count, x, y) for [(a, b, mult)] in concave order.

    The doubled area is x*y minus the pairwise cross sum of the path edges,
    and the trapezoid version of Pick's theorem gives
    2L = 2A + steps + x + y + 2.
    """
    acc = 0
    px = py = 0
    steps = 0
    for a, b, t in classes:
        acc += (px * (-b) - py * a) * t
        px += a * t
        py -= b * t
        steps += t
    x, y = px, -py
    doubled = (x * y - acc) + steps + x + y + 2
    if doubled % 2:
        raise AssertionError("lattice point count must be integral")
    return doubled // 2, x, y


def cg_lattice_points(cg: ConvexGenerator) -> int:
    """Lattice points enclosed by the path and the axes."""
    return _lattice_terms([(g.a, g.b, g.mult) for g in cg.groups])[0]


def cg_grading(cg: ConvexGenerator) -> int:
    """2(L - 1) - h for L the enclosed lattice point count."""
    return 2 * (cg_lattice_points(cg) - 1) - cg_h_count(cg)


# ---------------------------------------------------------------------------
# Toric domains


@dataclass(frozen=True)
class ToricDomain:
    """Convex moment region in the first quadrant, kept as hull vertices."""

    kind: str
    params: tuple
    vertices: tuple

    @classmethod
    def ball(cls, r: float) -> "ToricDomain":
        if not r > 0:
            raise ValueError("ball radius must be positive")
        r = float(r)
        return cls("ball", (r,), ((0.0, 0.0), (r, 0.0), (0.0, r)))

    @classmethod
    def ellipsoid(cls, a: float, b: float) -> "ToricDomain":
        if not (a > 0 and b > 0):
            raise ValueError("ellipsoid axes must be positive")
        return cls("ellipsoid", (float(a), float(b)),
                   ((0.0, 0.0), (float(a), 0.0), (0.0, float(b))))

    @classmethod
    def polygon(cls, points) -> "ToricDomain":
        pts = [(float(x), float(y)) for x, y in points]
        if not pts:
            raise ValueError("polygon needs at least one vertex")
        for x, y in pts:
            if x < -_TOL or y < -_TOL:
                raise ValueError("polygon vertex outside the first quadrant")
        return cls("polygon", tuple(pts), _hull_with_origin(pts))

    def support(self, u: float, v: float) -> float:
        """Support function: max of u*x + v*y over the region."""
        return max(u * x + v * y for x, y in self.vertices)

    def scale(self, r: float) -> "ToricDomain":
        if not r > 0:
            raise ValueError("scale factor must be positive")
        pts = tuple((r * x, r * y) for x, y in self.vertices)
        return ToricDomain("polygon", pts, pts)

    def describe(self) -> str:
        if self.kind == "ball":
            return "ball:%g" % self.params[0]
        if self.kind == "ellipsoid":
            return "ellipsoid:%g,%g" % self.params[:2]
        return "polygon:" + ";".join("%g,%g" % p for p in self.params)


def _hull_with_origin(pts):
    pts = sorted(set(pts) | {(0.0, 0.0)})
    if len(pts) <= 2:
        return tuple(pts)

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2:
                (ax, ay), (bx, by) = chain[-2], chain[-1]
                if (bx - ax) * (p[1] - ay) - (by - ay) * (p[0] - ax) <= 0:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(list(reversed(pts)))
    return tuple(lower[:-1] + upper[:-1])


def parse_domain(text: str) -> ToricDomain:
    """ball:r | ellipsoid:a,b | polygon:x1,y1;x2,y2;..."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ValueError("domain descriptor needs kind:parameters")
    try:
        if kind == "ball":
            return ToricDomain.ball(float(rest))
        if kind == "ellipsoid":
            a, b = rest.split(",")
            return ToricDomain.ellipsoid(float(a), float(b))
        if kind == "polygon":
            pts = []
            for chunk in rest.split(";"):
                x, y = chunk.split(",")
                pts.append((float(x), float(y)))
            return ToricDomain.polygon(pts)
    except ValueError as exc:
        raise ValueError("bad domain descriptor %r: %s" % (text, exc)) from None
    raise ValueError("unknown domain kind %r" % kind)


def support_action(domain: ToricDomain, cg: ConvexGenerator) -> float:
    """Sum of mult * support(b, a) over classes of displacement (a, -b)."""
    return sum(g.mult * domain.support(g.b, g.a) for g in cg.groups)


# ---------------------------------------------------------------------------
# Relation to chain-complex generators


def toric_multiplicity(path: KLatticePath) -> int:
    """Total full-arrow multiplicity, walls included, pairs excluded."""
    return down_run(path) + up_run(path) + sum(g.mult for g in middle_groups(path))


def leq_relation(cg: ConvexGenerator, path: KLatticePath, domain: ToricDomain,
                 tol: float = _TOL) -> bool:
    """Grading equality + action inequality + point-count inequality."""
    if cg_grading(cg) != grading(path):
        return False
    if support_action(domain, cg) > action(path) + tol:
        return False
    lhs = Fraction(2 * (cg_x(cg) + cg_y(cg)) - cg_h_count(cg), 2)
    rhs = pair_count(path) + toric_multiplicity(path) - 1
    return lhs >= rhs


# ---------------------------------------------------------------------------
# Factorizations


def factorizations(path: KLatticePath):
    """Partitions of the orbit multiset into nullhomologous blocks.

    Atomic items are the half-arrow pair and each whole orbit class with its
    multiplicity; splitting a class across blocks would repeat an elliptic
    orbit in two factors, which the matching rules forbid.  Each block must
    itself be a valid generator.  Partitions are returned deterministically,
    the trivial one first.
    """
    kind = validate(path)
    if kind == "IV":
        raise ValueError("factorization requires at most one half-arrow pair")
    if any(g.h_flag for g in path.groups):
        raise ValueError("factorization requires an h-free generator")

    items = []
    if path.start_pair:
        items.append(("pair-", 0, 0, 0))
    if path.end_pair:
        items.append(("pair+", 0, 0, 0))
    for g in path.groups:
        items.append(("class", g.q, g.p, g.mult))

    def assemble(block):
        sp = any(it[0] == "pair-" for it in block)
        ep = any(it[0] == "pair+" for it in block)
        down = up = 0
        mids = []
        for tag, q, p, mult in block:
            if tag != "class":
                continue
            if (q, p) == (0, -1):
                down = mult
            elif (q, p) == (0, 1):
                up = mult
            else:
                mids.append((q, p, mult))
        mids.sort(key=lambda c: slope_key(c[0], c[1]))
        candidate = build_path(sp, ep, down, up,
                               [EdgeGroup(q, p, m, False) for q, p, m in mids])
        try:
            validate(candidate)
        except ValueError:
            return None
        return candidate

    def splits(remaining):
        if not remaining:
            yield []
            return
        first, rest = remaining[0], remaining[1:]
        for sub in splits(rest):
            for i in range(len(sub)):
                yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]
            yield [[first]] + sub

    out = []
    seen = set()
    for split in splits(items):
        blocks = []
        for block in split:
            candidate = assemble(block)
            if candidate is None:
                blocks = None
                break
            blocks.append(candidate)
        if blocks is None:
            continue
        blocks = tuple(sorted(blocks, key=format_path))
        if blocks in seen:
            continue
        seen.add(blocks)
        out.append(blocks)
    out.sort(key=lambda part: (len(part), [format_path(p) for p in part]))
    return out


# ---------------------------------------------------------------------------
# Minimization over convex generators


def _pool_by_height(domain: ToricDomain, i_target: int):
    """Sloped primitive classes usable at this grading, bucketed by b.

    A lone sloped class (a, b) already encloses (ab + a + b + 3) / 2 lattice
    points, and the enclosed count only grows as classes are added, so
    classes with ab + a + b beyond the grading budget can never appear.
    Returns {b: (ascending a list, aligned support costs)}.
    """
    budget = max(i_target, 1)
    buckets = {}
    for b in range(1, budget + 1):
        if b * 1 + 1 + b > budget:
            break
        alist = []
        costs = []
        for a in range(1, budget + 1):
            if a * b + a + b > budget:
                break
            if gcd(a, b) == 1:
                alist.append(a)
                costs.append(domain.support(b, a))
        if alist:
            buckets[b] = (alist, costs)
    return buckets


def _triangle_family(lattice_target: int):
    """Candidate class lists e(1,0)^j e(1,1)^m e(0,1)^d hitting the target."""
    out = []
    m = 0
    while m * (m + 3) // 2 + 1 <= lattice_target:
        for d in range(0, lattice_target):
            base = (m + 1) * (d + 1) + m * (m + 1) // 2
            if base > lattice_target:
                break
            rem = lattice_target - base
            if rem % (m + d + 1):
                continue
            j = rem // (m + d + 1)
            classes = []
            if j:
                classes.append((1, 0, j))
            if m:
                classes.append((1, 1, m))
            if d:
                classes.append((0, 1, d))
            out.append(classes)
        m += 1
    return out


def _min_action_search(domain: ToricDomain, i_target: int, xy_bound,
                       flexible_h: bool, tol: float):
    """Least support action over convex generators of the given grading.

    flexible_h: allow any even h count up to the number of sloped classes
    and enforce x + y - h/2 >= xy_bound; otherwise require h = 0 exactly.
    Returns (value, witness) with witness None when infeasible.

    Appending (a, b) with multiplicity t to a partial path of width x turns
    the doubled enclosed count D into D + t(2bx + 1 + a + b) + a*b*t^2, so
    the count grows strictly along every branch; a branch dies once it
    overshoots the largest count any h assignment could justify, or once its
    action cannot beat the incumbent.  Children are generated per height b
    from the closed-form feasibility range instead of a full pool scan.
    """
    if i_target < 0 or i_target % 2:
        raise ValueError("grading target must be even and nonnegative")
    buckets = _pool_by_height(domain, i_target)
    cost_h = domain.support(0.0, 1.0)
    cost_v = domain.support(1.0, 0.0)
    roof = i_target + 2  # doubled count bound before the h allowance
    best_val = inf
    best_wit = None

    def offer(chosen, doubled, x, y, n_sloped, used):
        nonlocal best_val, best_wit
        h = doubled - 2 - i_target
        if h < 0:
            return
        if flexible_h:
            if h % 2 or h > n_sloped:
                return
            if 2 * (x + y) - h < 2 * xy_bound - tol:
                return
        elif h != 0:
            return
        if used < best_val - 1e-12:
            groups = []
            flags_left = h
            for a, b, t in chosen:
                if flags_left and a >= 1 and b >= 1:
                    groups.append(CgClass(a, b, t - 1, True))
                    flags_left -= 1
                else:
                    groups.append(CgClass(a, b, t, False))
            best_val = used
            best_wit = ConvexGenerator(tuple(groups))

    def seed(classes):
        lattice, x, y = _lattice_terms(classes)
        n_sloped = sum(1 for a, b, _ in classes if a >= 1 and b >= 1)
        used = sum(t * domain.support(b, a) for a, b, t in classes)
        offer(classes, 2 * lattice, x, y, n_sloped, used)

    for classes in _triangle_family(i_target // 2 + 1):
        seed(classes)
    half = i_target // 2
    for a in (half - 1, 1):
        b = half - a
        if a >= 1 and b >= 1 and gcd(a, b) == 1:
            seed([(a, b, 1)])

    # Appending (a, b) x t at width x changes 2(x+y) - doubled by
    # t(a+b-1-2bx) - ab t^2, which is never positive, so the quantity only
    # falls along a branch; the boundary constraint needs it to end at
    # 2*xy_bound - i_target - 2 or more.
    g_floor = 2 * xy_bound - i_target - 2 - tol if flexible_h else None

    # steepness b/a as the pair (b, a); (-1, 1) sits below horizontal
    def rec(last_b, last_a, chosen, x, y, doubled, n_sloped, used):
        if flexible_h and 2 * (x + y) - doubled < g_floor:
            return
        offer(chosen, doubled, x, y, n_sloped, used)

        def descend(a, b, cost, extra):
            cap = (n_sloped + extra) if flexible_h else 0
            lin = 2 * b * x + 1 + a + b
            t = 1
            while True:
                new_used = used + t * cost
                if new_used >= best_val - 1e-12:
                    break
                ndoubled = doubled + t * lin + a * b * t * t
                if ndoubled > roof + cap:
                    break
                chosen.append((a, b, t))
                rec(b, a, chosen, x + a * t, y + b * t, ndoubled,
                    n_sloped + extra, new_used)
                chosen.pop()
                t += 1

        if last_b < 0:
            descend(1, 0, cost_h, 0)
        cap_s = (n_sloped + 1) if flexible_h else 0
        bmax = (roof + cap_s - doubled - 2) // (2 * x + 2) if roof + cap_s >= doubled + 2 else 0
        for b, (alist, costs) in buckets.items():
            if b > bmax:
                continue
            slack = roof + cap_s - doubled - 1 - b * (2 * x + 1)
            amax = slack // (b + 1)
            if last_b > 0:
                # strictly steeper than b_last/a_last
                limit = (b * last_a - 1) // last_b
                if limit < amax:
                    amax = limit
            for pos, a in enumerate(alist):
                if a > amax:
                    break
                descend(a, b, costs[pos], 1)
        if last_a > 0:
            descend(0, 1, cost_v, 0)

    rec(-1, 1, [], 0, 0, 2, 0, 0.0)
    return best_val, best_wit


def admissible_min_action(domain: ToricDomain, i_target: int, xy_bound,
                          tol: float = _TOL):
    """Least action among convex generators with the given grading, an even
    h count, and x + y - h/2 >= xy_bound; (inf, None) when infeasible."""
    return _min_action_search(domain, i_target, xy_bound, True, tol)


def toric_capacity_detail(domain: ToricDomain, k: int):
    """Action-minimizing all-elliptic convex generator of grading 2k."""
    if k < 0:
        raise ValueError("capacity index must be nonnegative")
    if k == 0:
        return 0.0, EMPTY_CONVEX
    value, wit = _min_action_search(domain, 2 * k, 0, False, _TOL)
    if wit is None:
        raise AssertionError("toric capacity search lost its own seed family")
    return value, wit


def ech_capacity_toric(domain: ToricDomain, k: int) -> float:
    """Min support action over all-elliptic convex generators of grading 2k."""
    return toric_capacity_detail(domain, k)[0]


# ---------------------------------------------------------------------------
# Obstruction and the Gromov bound


def embedding_obstructed(domain: ToricDomain, path: KLatticePath,
                         tol: float = _TOL) -> bool:
    """True when no factorization admits a compatible convex generator for
    every factor: each factor needs one of equal grading, no larger action,
    and enough boundary lattice points."""
    for part in factorizations(path):
        feasible = True
        for block in part:
            bound = pair_count(block) + toric_multiplicity(block) - 1
            value, _ = _min_action_search(domain, grading(block), bound, True, tol)
            if value > action(block) + tol:
                feasible = False
                break
        if feasible:
            return False
    return True


@dataclass(frozen=True)
class GromovRecord:
    k: int
    generator_spec: str
    rhs_action: float
    min_lhs_action: float
    witness_spec: str
    bound: float
    flat_candidate_bound: float


@dataclass(frozen=True)
class GromovReport:
    records: tuple
    running_inf: tuple

    @property
    def infimum(self) -> float:
        return self.running_inf[-1]


def gromov_upper(kmax: int) -> GromovReport:
    """Upper bounds for the embedding constant of the unit-ball family.

    For each k the distinguished generator (one pair, k down arrows, one
    horizontal arrow, k+1 up arrows) must be matched inside the scaled ball;
    the ratio of its action to the least admissible action bounds the
    embedding constant from above.  flat_candidate_bound tracks the weaker
    candidate that only uses the flat horizontal family e(1,0)^(2k+2).
    """
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    ball = ToricDomain.ball(1.0)
    records = []
    running = []
    for k in range(kmax + 1):
        lam = build_path(True, False, k, k + 1, [EdgeGroup(1, 0, 1, False)])
        validate(lam)
        if len(factorizations(lam)) != 1:
            raise AssertionError("distinguished generator must factor trivially")
        rhs = action(lam)
        bound_pts = pair_count(lam) + toric_multiplicity(lam) - 1
        value, wit = admissible_min_action(ball, grading(lam), bound_pts)
        if wit is None or value <= 0:
            raise AssertionError("admissible minimum must be positive and attained")
        bound = rhs / value
        flat = rhs / (2.0 * (k + 1))
        records.append(GromovRecord(k, format_path(lam), rhs, value,
                                    format_convex_generator(wit), bound, flat))
        running.append(bound if not running else min(running[-1], bound))
    return GromovReport(tuple(records), tuple(running))
