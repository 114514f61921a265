"""Combinatorial cubes, line machinery, and the constrained Gallai lift.

The lift turns a Ramsey set H of cube points into a rational point set X in
R^d (via a positive weight vector over the template), carrying the lines of H
to homothetic copies of the template while keeping a family of polynomial
constraints nonzero on every pair of X.  Certificates record everything
needed to re-verify the three guarantees: constraints respected, Berge girth
of the copy family, and the monochromatic-copy property under k colors.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from .budget import DEFAULT_BUDGET, Budget
from .coloring import find_avoiding_coloring
from .errors import BudgetExceeded, DimensionMismatch, SurrogateFailed, TriesExhausted
from .geometry import HomotheticMap, Point, apply_homothety, frac
from .graphs import Graph, shortest_cycle

CubePoint = tuple[int, ...]


@dataclass(frozen=True)
class CombinatorialLine:
    """m points of [m]^n, constant off the active coordinates.

    Ordinary lines step through 1..m on every active coordinate together; a
    generalized line applies a per-coordinate permutation to the steps.
    Coordinates are 0-based; cube symbols are 1-based.
    """

    m: int
    n: int
    active: frozenset[int]
    fixed: tuple[tuple[int, int], ...]  # sorted (coordinate, symbol) pairs
    perms: tuple[tuple[int, tuple[int, ...]], ...] | None = None

    def __post_init__(self):
        if not self.active:
            raise ValueError("a line needs at least one active coordinate")
        if set(dict(self.fixed)) != set(range(self.n)) - self.active:
            raise ValueError("fixed coordinates must complement the active set")
        if self.perms is not None:
            if set(dict(self.perms)) != set(self.active):
                raise ValueError("permutations must cover exactly the active set")

    @property
    def is_ordinary(self) -> bool:
        if self.perms is None:
            return True
        identity = tuple(range(1, self.m + 1))
        return all(p == identity for _, p in self.perms)

    def points(self) -> tuple[CubePoint, ...]:
        """The m points, in step order 1..m."""
        fixed = dict(self.fixed)
        perms = dict(self.perms) if self.perms is not None else {}
        out = []
        for step in range(1, self.m + 1):
            coords = []
            for i in range(self.n):
                if i in self.active:
                    coords.append(perms[i][step - 1] if i in perms else step)
                else:
                    coords.append(fixed[i])
            out.append(tuple(coords))
        return tuple(out)


def enumerate_lines(m: int, n: int, budget: Budget = DEFAULT_BUDGET):
    """All ordinary combinatorial lines of [m]^n; count is (m+1)^n - m^n."""
    if m < 2 or n < 1:
        raise ValueError("need m >= 2 and n >= 1")
    if (m + 1) ** n > budget.max_enumeration:
        raise BudgetExceeded(f"(m+1)^n = {(m + 1) ** n} beyond enumeration budget")
    lines = []
    choices = list(range(1, m + 1)) + [0]  # 0 marks an active coordinate
    for pattern in product(choices, repeat=n):
        active = frozenset(i for i, c in enumerate(pattern) if c == 0)
        if not active:
            continue
        fixed = tuple((i, c) for i, c in enumerate(pattern) if c != 0)
        lines.append(CombinatorialLine(m, n, active, fixed))
    return lines


def is_generalized_line(points, m: int) -> bool:
    """Decide whether a set of m cube points is a generalized line.

    A coordinate must be constant over the set or take all m symbols; any
    point order then induces valid per-coordinate permutations, so no search
    over orderings is needed.
    """
    pts = list(points)
    if len(pts) != m:
        raise ValueError(f"expected exactly {m} points, got {len(pts)}")
    if len(set(pts)) != m:
        return False
    n = len(pts[0])
    if m == 1:
        return any(c == 1 for c in pts[0])
    full = set(range(1, m + 1))
    for j in range(n):
        column = [p[j] for p in pts]
        if len(set(column)) == 1:
            continue
        if set(column) != full or len(set(column)) != m:
            return False
    return True


def find_mono_line(H, coloring, lines):
    """Some line fully inside H whose points share one color, or None."""
    H = set(H)
    for line in lines:
        pts = line.points()
        if all(p in H for p in pts):
            colors = {coloring[p] for p in pts}
            if len(colors) == 1:
                return line
    return None


@dataclass(frozen=True)
class RamseyReport:
    holds: bool
    k: int
    n_points: int
    n_lines: int
    nodes: int
    witness: tuple | None  # an avoiding coloring (aligned with sorted points)

    def witness_coloring(self, points):
        if self.witness is None:
            return None
        return dict(zip(sorted(points), self.witness))


def verify_ramsey(H, lines, k: int, budget: Budget = DEFAULT_BUDGET) -> RamseyReport:
    """Does every k-coloring of H contain a monochromatic line inside H?"""
    pts = sorted(set(H))
    index = {p: i for i, p in enumerate(pts)}
    families = []
    for line in lines:
        lp = line.points()
        if all(p in index for p in lp):
            families.append(tuple(index[p] for p in lp))
    res = find_avoiding_coloring(len(pts), families, k, budget)
    return RamseyReport(res.exhausted, k, len(pts), len(families), res.nodes, res.coloring)


@dataclass(frozen=True)
class SparsifyReport:
    points: tuple[CubePoint, ...]
    removed: tuple[CubePoint, ...]
    berge: object  # int or math.inf
    n_lines: int
    ramsey_nodes: int


def sparsify(H, m: int, n: int, g: int, k: int, budget: Budget = DEFAULT_BUDGET) -> SparsifyReport:
    """Greedy surrogate for a sparse Ramsey subset: remove points until no
    tuple of fewer than g surviving lines forms a cycle, re-proving the
    Ramsey property after every removal.

    This is a search, not a theorem — it raises SurrogateFailed when no
    removal keeps the coloring property.
    """
    current = set(H)
    all_lines = enumerate_lines(m, n, budget)
    base = verify_ramsey(current, all_lines, k, budget)
    if not base.holds:
        raise ValueError("sparsify needs a k-Ramsey input set")
    removed = []
    nodes = base.nodes
    while True:
        inside = [ln for ln in all_lines if all(p in current for p in ln.points())]
        families = [ln.points() for ln in inside]
        cyc = shortest_berge_cycle(families)
        if cyc is None or cyc[0] >= g:
            bg = math.inf if cyc is None else cyc[0]
            return SparsifyReport(
                tuple(sorted(current)), tuple(removed), bg, len(inside), nodes
            )
        _, elements = cyc
        progress = False
        for x in sorted(set(elements)):
            trial = current - {x}
            rep = verify_ramsey(trial, all_lines, k, budget)
            nodes += rep.nodes
            if rep.holds:
                current = trial
                removed.append(x)
                progress = True
                break
        if not progress:
            raise SurrogateFailed(
                f"no removal breaks a {cyc[0]}-cycle while keeping the Ramsey property"
            )


@dataclass(frozen=True)
class Template:
    """Ordered, pairwise-distinct points t_1..t_m in R^d."""

    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(tuple(frac(c) for c in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("template needs at least one point")
        if len({len(p) for p in pts}) != 1:
            raise DimensionMismatch("template points must share a dimension")
        if len(set(pts)) != len(pts):
            raise ValueError("template points must be pairwise distinct")

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def d(self) -> int:
        return len(self.points[0])


@dataclass(frozen=True)
class Constraint:
    """Named exact evaluator on ordered point pairs; nonzero means respected."""

    name: str
    fn: Callable[[Point, Point], Fraction]

    def __call__(self, p: Point, q: Point) -> Fraction:
        return self.fn(p, q)


def _delta(p: Point, q: Point) -> Fraction:
    return sum((a - b) ** 2 for a, b in zip(p, q))


DELTA = Constraint("delta", _delta)


def default_family() -> tuple[Constraint, ...]:
    """The distinctness polynomial alone."""
    return (DELTA,)


def with_delta(constraints) -> tuple[Constraint, ...]:
    family = tuple(constraints)
    if not any(c.name == "delta" for c in family):
        family = (DELTA,) + family
    return family


def family_respects(constraints, points):
    """First (constraint, i, j) with a zero value on ordered distinct pairs, or None."""
    pts = list(points)
    for c in constraints:
        for i, p in enumerate(pts):
            for j, q in enumerate(pts):
                if i != j and c(p, q) == 0:
                    return (c.name, i, j)
    return None


def zeta(gamma, x: CubePoint, template: Template) -> Point:
    """Embed a cube point: the gamma-weighted sum of template points, Σ γ_i t_{x_i}."""
    if len(gamma) != len(x):
        raise DimensionMismatch("gamma length must equal the cube dimension")
    acc = tuple(Fraction(0) for _ in range(template.d))
    for g, sym in zip(gamma, x):
        t = template.points[sym - 1]
        acc = tuple(a + g * c for a, c in zip(acc, t))
    return acc


def sample_gamma(
    n: int,
    template: Template,
    H,
    constraints,
    seed: int = 0,
    max_tries: int | None = None,
    num_range: tuple[int, int] = (1, 12),
    den_range: tuple[int, int] = (1, 4),
    forbid_stray_copies: bool = False,
):
    """Positive rational weights making every constraint nonzero on every
    ordered pair of distinct embedded points of H.  Deterministic per seed.

    The bad set is a finite union of polynomial zero sets with empty
    interior, so rejection sampling succeeds after a handful of tries; a
    constraint violating its own template precondition surfaces as
    TriesExhausted.

    With forbid_stray_copies, a weight vector is also rejected when the
    embedded set contains a homothetic template copy whose preimage is not a
    generalized combinatorial line — the positive-map recognizer plays the
    role of the tuple polynomials, so afterwards *every* copy in the image
    comes from a generalized line of H.
    """
    rng = random.Random(seed)
    tries = max_tries if max_tries is not None else DEFAULT_BUDGET.max_tries
    pts = sorted(set(H))
    for _ in range(tries):
        gamma = tuple(
            Fraction(rng.randint(*num_range), rng.randint(*den_range)) for _ in range(n)
        )
        embedded = [zeta(gamma, x, template) for x in pts]
        ok = True
        for c in constraints:
            if not ok:
                break
            for i, p in enumerate(embedded):
                if not ok:
                    break
                for j, q in enumerate(embedded):
                    if i != j and c(p, q) == 0:
                        ok = False
                        break
        if ok and forbid_stray_copies:
            ok = _all_copies_from_lines(embedded, pts, template)
        if ok:
            return gamma
    raise TriesExhausted(f"no weight vector accepted after {tries} tries")


def _all_copies_from_lines(embedded, pts, template: Template) -> bool:
    """Does every homothetic copy inside the embedded set pull back to a
    generalized combinatorial line?  Assumes the embedding is injective."""
    preimage = dict(zip(embedded, pts))
    if len(preimage) != len(pts):
        return False
    for copy in enumerate_copies(embedded, template):
        cube_points = {preimage[p] for p in copy.points}
        if not is_generalized_line(cube_points, template.m):
            return False
    return True


@dataclass(frozen=True)
class HomotheticCopy:
    """A homothetic image of the template, with its map and ordered points."""

    map: HomotheticMap
    points: tuple[Point, ...]

    def point_set(self) -> frozenset:
        return frozenset(self.points)


@dataclass(frozen=True)
class LiftInfo:
    gamma: tuple[Fraction, ...]
    H: tuple[CubePoint, ...]
    m: int
    n: int


@dataclass(frozen=True)
class GallaiCertificate:
    """A point set X with a family of homothetic template copies such that
    every k-coloring of X has a monochromatic copy, the copies have Berge
    girth at least g, and the constraints are nonzero on all pairs of X."""

    template: Template
    X: tuple[Point, ...]
    copies: tuple[HomotheticCopy, ...]
    k: int
    g: int
    constraints: tuple[Constraint, ...]
    lift: LiftInfo | None = None

    def __post_init__(self):
        xset = set(self.X)
        if len(xset) != len(self.X):
            raise ValueError("X must not contain duplicates")
        seen = set()
        for copy in self.copies:
            if not set(copy.points) <= xset:
                raise ValueError("every copy must live inside X")
            key = copy.point_set()
            if key in seen:
                raise ValueError("copies must be pairwise distinct as sets")
            seen.add(key)

    def x_index(self) -> dict:
        return {p: i for i, p in enumerate(self.X)}

    def copy_indices(self) -> tuple[tuple[int, ...], ...]:
        idx = self.x_index()
        return tuple(tuple(idx[p] for p in c.points) for c in self.copies)


def lift_gallai(
    template: Template,
    constraints,
    H,
    lines_in_H,
    k: int,
    g: int,
    seed: int = 0,
    max_tries: int | None = None,
    forbid_stray_copies: bool = False,
) -> GallaiCertificate:
    """Build a certificate from a Ramsey set H and its internal lines.

    X is the embedded image of H; each line becomes a copy under the map with
    shift Σ_{i fixed} γ_i·t_{x_i} and scale Σ_{i active} γ_i > 0.  The
    distinctness polynomial is always part of the family, so the embedding is
    injective and the line incidence structure transfers exactly.

    forbid_stray_copies additionally guarantees that every homothetic copy in
    X (not just the recorded ones) is the image of a generalized line, which
    is what all-copies certificate verification quantifies over.
    """
    family = with_delta(constraints)
    pts = sorted(set(H))
    pset = set(pts)
    n = len(pts[0])
    for line in lines_in_H:
        if not all(p in pset for p in line.points()):
            raise ValueError("every line must lie inside H")
    gamma = sample_gamma(
        n,
        template,
        pts,
        family,
        seed=seed,
        max_tries=max_tries,
        forbid_stray_copies=forbid_stray_copies,
    )
    embed = {x: zeta(gamma, x, template) for x in pts}
    X = tuple(embed[x] for x in pts)
    copies = []
    for line in lines_in_H:
        shift = tuple(Fraction(0) for _ in range(template.d))
        for i, sym in line.fixed:
            t = template.points[sym - 1]
            shift = tuple(a + gamma[i] * c for a, c in zip(shift, t))
        scale = sum((gamma[i] for i in line.active), Fraction(0))
        h = HomotheticMap(shift, scale)
        copy_pts = tuple(apply_homothety(h, t) for t in template.points)
        assert copy_pts == tuple(embed[x] for x in line.points())
        copies.append(HomotheticCopy(h, copy_pts))
    return GallaiCertificate(
        template=template,
        X=X,
        copies=tuple(copies),
        k=k,
        g=g,
        constraints=family,
        lift=LiftInfo(gamma, tuple(pts), template.m, n),
    )


def proportional(points, template: Template, allow_degenerate: bool = False) -> bool:
    """Is there a map t ↦ shift + scale·t carrying the template tuple to the
    given tuple?  scale may be zero or negative only when allow_degenerate."""
    pts = [tuple(frac(c) for c in p) for p in points]
    if len(pts) != template.m:
        raise ValueError("point tuple length must match the template")
    tpl = template.points
    scale = None
    for i in range(1, len(pts)):
        for j in range(template.d):
            dt = tpl[i][j] - tpl[0][j]
            dp = pts[i][j] - pts[0][j]
            if dt == 0:
                if dp != 0:
                    return False
            else:
                ratio = dp / dt
                if scale is None:
                    scale = ratio
                elif ratio != scale:
                    return False
    if scale is None:  # single-point template
        return True
    return allow_degenerate or scale > 0


def enumerate_copies(X, template: Template, budget: Budget = DEFAULT_BUDGET):
    """All homothetic copies of the template inside X, found by solving the
    map from each ordered point pair and deduplicating by point set."""
    pts = [tuple(frac(c) for c in p) for p in X]
    if len(pts) ** 2 > budget.max_enumeration:
        raise BudgetExceeded(f"|X|^2 = {len(pts) ** 2} beyond enumeration budget")
    if len(pts) < template.m or template.m < 2:
        return ()
    pset = set(pts)
    t1, t2 = template.points[0], template.points[1]
    seen = set()
    out = []
    for p in pts:
        for q in pts:
            if p == q:
                continue
            scale = None
            ok = True
            for j in range(template.d):
                dt = t1[j] - t2[j]
                dp = p[j] - q[j]
                if dt == 0:
                    if dp != 0:
                        ok = False
                        break
                else:
                    ratio = dp / dt
                    if scale is None:
                        scale = ratio
                    elif ratio != scale:
                        ok = False
                        break
            if not ok or scale is None or scale <= 0:
                continue
            shift = tuple(a - scale * b for a, b in zip(p, t1))
            h = HomotheticMap(shift, scale)
            copy_pts = tuple(apply_homothety(h, t) for t in template.points)
            if all(cp in pset for cp in copy_pts):
                key = frozenset(copy_pts)
                if key not in seen:
                    seen.add(key)
                    out.append(HomotheticCopy(h, copy_pts))
    return tuple(out)


def shortest_berge_cycle(family):
    """Shortest cycle (length, witness elements) over a set family, or None.

    A cycle of length ℓ ≥ 2 is a tuple of distinct sets T_1..T_ℓ with
    distinct elements x_i ∈ T_i ∩ T_{i+1} (cyclically).  Computed as half the
    girth of the bipartite set-element incidence graph.
    """
    sets = []
    seen = set()
    for s in family:
        fs = frozenset(s)
        if fs not in seen:
            seen.add(fs)
            sets.append(fs)
    elements = sorted({e for s in sets for e in s})
    el_index = {e: len(sets) + i for i, e in enumerate(elements)}
    edges = []
    for si, s in enumerate(sets):
        for e in s:
            edges.append((si, el_index[e]))
    graph = Graph.from_edges(len(sets) + len(elements), edges)
    cyc = shortest_cycle(graph)
    if cyc is None:
        return None
    assert len(cyc) % 2 == 0
    witness_elements = [elements[v - len(sets)] for v in cyc if v >= len(sets)]
    return len(cyc) // 2, witness_elements


def berge_girth(family):
    """Minimum Berge-cycle length of the family (math.inf when acyclic)."""
    cyc = shortest_berge_cycle(family)
    return math.inf if cyc is None else cyc[0]


@dataclass(frozen=True)
class CertificateReport:
    """Per-condition verification outcome for a certificate."""

    constraints_ok: bool
    constraint_witness: tuple | None  # (name, i, j)
    berge: object  # int or math.inf
    girth_ok: bool
    coloring_ok: bool
    coloring_witness: tuple | None
    checked_all_copies: bool
    n_copies_checked: int
    nodes: int

    @property
    def ok(self) -> bool:
        return self.constraints_ok and self.girth_ok and self.coloring_ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "constraints_ok": self.constraints_ok,
            "constraint_witness": list(self.constraint_witness)
            if self.constraint_witness
            else None,
            "berge_girth": "inf" if self.berge == math.inf else self.berge,
            "girth_ok": self.girth_ok,
            "coloring_ok": self.coloring_ok,
            "coloring_witness": list(self.coloring_witness)
            if self.coloring_witness
            else None,
            "checked_all_copies": self.checked_all_copies,
            "n_copies_checked": self.n_copies_checked,
            "nodes": self.nodes,
        }


def verify_certificate(
    cert: GallaiCertificate,
    check_all_copies: bool = False,
    budget: Budget = DEFAULT_BUDGET,
) -> CertificateReport:
    """Re-verify the three certificate conditions from scratch.

    With check_all_copies the girth and coloring conditions quantify over
    every homothetic copy of the template in X, not just the recorded family.
    """
    witness = family_respects(cert.constraints, cert.X)
    constraints_ok = witness is None

    if check_all_copies:
        copies = enumerate_copies(cert.X, cert.template, budget)
    else:
        copies = cert.copies
    point_sets = [c.points for c in copies]
    bg = berge_girth(point_sets)
    girth_ok = bg >= cert.g

    idx = cert.x_index()
    families = [tuple(idx[p] for p in c.points) for c in copies]
    res = find_avoiding_coloring(len(cert.X), families, cert.k, budget)
    return CertificateReport(
        constraints_ok=constraints_ok,
        constraint_witness=witness,
        berge=bg,
        girth_ok=girth_ok,
        coloring_ok=res.exhausted,
        coloring_witness=res.coloring,
        checked_all_copies=check_all_copies,
        n_copies_checked=len(copies),
        nodes=res.nodes,
    )
