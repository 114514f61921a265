"""Exhaustive search for colorings that avoid monochromatic member sets.

One engine backs three verifiers: combinatorial-line Ramsey checks on cubes,
certificate condition 3 on point sets, and graph k-colorability (edges are
just 2-element families).  The search is a DPLL-style backtracker:

* propagation — when all but one point of a family share a color, that color
  is forbidden for the last point; a point with one remaining color is
  assigned immediately;
* branching — most-constrained point first (most forbidden colors, then most
  family memberships), trying used colors plus at most one fresh color.

Colors are interchangeable in this problem, so the fresh-color rule is a
sound symmetry break: the yes/no outcome is invariant under color
permutation.  Everything is deterministic, so witnesses are reproducible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .budget import DEFAULT_BUDGET, Budget
from .errors import BudgetExceeded


@dataclass(frozen=True)
class AvoidResult:
    """Outcome of an avoidance search.

    coloring is None when the search exhausted all canonical colorings, i.e.
    every k-coloring contains a monochromatic family.
    """

    coloring: tuple[int, ...] | None
    nodes: int

    @property
    def exhausted(self) -> bool:
        return self.coloring is None

    def digest(self) -> str:
        """Stable fingerprint of the search outcome (for audit trails)."""
        body = f"{self.coloring}|{self.nodes}".encode()
        return hashlib.sha256(body).hexdigest()[:16]


class _Solver:
    def __init__(self, n_points: int, families, k: int, max_nodes: int):
        self.n = n_points
        self.k = k
        self.full = (1 << k) - 1
        self.fam_pts = [tuple(f) for f in families]
        for f in self.fam_pts:
            if not f:
                raise ValueError("empty family is not allowed")
        self.pt_fams = [[] for _ in range(n_points)]
        for i, f in enumerate(self.fam_pts):
            for p in f:
                self.pt_fams[p].append(i)
        self.weight = [len(fs) for fs in self.pt_fams]
        self.color = [-1] * n_points
        self.forb = [0] * n_points
        self.fam_mask = [0] * len(self.fam_pts)
        self.fam_left = [len(f) for f in self.fam_pts]
        self.used = 0
        self.nodes = 0
        self.max_nodes = max_nodes

    def _propagate(self, p0: int, c0: int):
        """Assign p0 := c0 plus all forced consequences; returns (journal, ok)."""
        journal = []
        queue = [(p0, c0)]
        ok = True
        while queue and ok:
            p, c = queue.pop()
            if self.color[p] >= 0:
                if self.color[p] != c:
                    ok = False
                continue
            bit = 1 << c
            if self.forb[p] & bit:
                ok = False
                continue
            self.color[p] = c
            journal.append(("c", p, 0))
            if c >= self.used:
                journal.append(("u", self.used, 0))
                self.used = c + 1
            for f in self.pt_fams[p]:
                old = self.fam_mask[f]
                journal.append(("f", f, old))
                self.fam_left[f] -= 1
                new = old | bit
                self.fam_mask[f] = new
                if new & (new - 1):
                    continue  # two colors present: family satisfied for good
                if self.fam_left[f] == 0:
                    ok = False
                    break
                if self.fam_left[f] == 1:
                    q = next(q for q in self.fam_pts[f] if self.color[q] < 0)
                    if not self.forb[q] & new:
                        journal.append(("b", q, self.forb[q]))
                        self.forb[q] |= new
                        allowed = self.full & ~self.forb[q]
                        if allowed == 0:
                            ok = False
                            break
                        if allowed & (allowed - 1) == 0:
                            queue.append((q, allowed.bit_length() - 1))
        return journal, ok

    def _undo(self, journal):
        for tag, a, b in reversed(journal):
            if tag == "c":
                self.color[a] = -1
            elif tag == "f":
                self.fam_mask[a] = b
                self.fam_left[a] += 1
            elif tag == "b":
                self.forb[a] = b
            else:  # "u"
                self.used = a

    def _pick(self) -> int:
        best, best_key = -1, (-1, -1)
        for p in range(self.n):
            if self.color[p] < 0:
                key = (self.forb[p].bit_count(), self.weight[p])
                if key > best_key:
                    best, best_key = p, key
        return best

    def search(self):
        p = self._pick()
        if p < 0:
            return list(self.color)
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceeded(
                f"coloring search exceeded {self.max_nodes} branch nodes"
            )
        for c in range(min(self.used + 1, self.k)):
            if self.forb[p] & (1 << c):
                continue
            journal, ok = self._propagate(p, c)
            if ok:
                found = self.search()
                if found is not None:
                    return found
            self._undo(journal)
        return None


def find_avoiding_coloring(
    n_points: int, families, k: int, budget: Budget = DEFAULT_BUDGET
) -> AvoidResult:
    """Find a k-coloring of range(n_points) with no monochromatic family.

    Returns AvoidResult(coloring=None, ...) when the exhaustive search proves
    that every k-coloring makes some family monochromatic.
    """
    if k < 1:
        raise ValueError("need at least one color")
    families = [tuple(f) for f in families]
    if any(len(f) == 1 for f in families):
        return AvoidResult(None, 0)  # a singleton is monochromatic always
    solver = _Solver(n_points, families, k, budget.max_nodes)
    found = solver.search()
    return AvoidResult(None if found is None else tuple(found), solver.nodes)
