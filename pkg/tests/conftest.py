import math
import random
from collections import deque
from fractions import Fraction
from itertools import combinations, permutations

import pytest

from constel import CosAngle, base_odd_cycle


@pytest.fixture(scope="session")
def triangle():
    return base_odd_cycle(3)


@pytest.fixture(scope="session")
def ortho_triangle():
    return base_odd_cycle(3, CosAngle.right())


# ---------------------------------------------------------------------------
# independent oracles (deliberately different algorithms from the package)

def girth_by_edge_deletion(n, edges):
    """Shortest cycle via per-edge deletion + BFS, or math.inf."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    best = math.inf
    for u, v in edges:
        dist = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if (x, y) in ((u, v), (v, u)):
                    continue
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        if v in dist:
            best = min(best, dist[v] + 1)
    return best


def chromatic_by_enumeration(n, edges):
    """Smallest k admitting a proper coloring, tried in fixed vertex order."""
    if n == 0:
        return 0
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)

    def extend(k, colors, i):
        if i == n:
            return True
        for c in range(k):
            if all(colors[w] != c for w in adj[i] if w < i):
                colors[i] = c
                if extend(k, colors, i + 1):
                    return True
        colors[i] = -1
        return False

    for k in range(1, n + 1):
        if extend(k, [-1] * n, 0):
            return k
    raise AssertionError("unreachable")


def berge_girth_by_enumeration(family):
    """Shortest Berge cycle by trying every tuple of distinct sets with
    backtracked distinct witnesses."""
    uniq = []
    for s in family:
        fs = frozenset(s)
        if fs not in uniq:
            uniq.append(fs)
    n = len(uniq)
    best = math.inf

    def has_witnesses(tup):
        used = set()

        def rec(i):
            if i == len(tup):
                return True
            inter = uniq[tup[i]] & uniq[tup[(i + 1) % len(tup)]]
            for x in sorted(inter):
                if x not in used:
                    used.add(x)
                    if rec(i + 1):
                        return True
                    used.discard(x)
            return False

        return rec(0)

    for length in range(2, n + 1):
        if length >= best:
            break
        for tup in permutations(range(n), length):
            if tup[0] != min(tup):
                continue
            if has_witnesses(tup):
                best = length
                break
    return best


def copies_1d_by_subsets(values, template_values):
    """All positively scaled translates of a 1-D template inside X, found by
    sorting each subset and solving the affine map from its first two points."""
    tpl = sorted(template_values)
    out = set()
    for sub in combinations(sorted(values), len(tpl)):
        scale_num = sub[1] - sub[0]
        scale_den = tpl[1] - tpl[0]
        scale = Fraction(scale_num) / Fraction(scale_den)
        if scale <= 0:
            continue
        shift = sub[0] - scale * tpl[0]
        if all(shift + scale * t in set(sub) for t in tpl) and tuple(
            sorted(shift + scale * t for t in tpl)
        ) == tuple(sub):
            out.add(frozenset(sub))
    return out


def ramsey_by_enumeration(points, families, k):
    """Try literally every k-coloring; None if all contain a mono family,
    else one avoiding coloring."""
    from itertools import product

    for assign in product(range(k), repeat=len(points)):
        if all(len({assign[i] for i in fam}) > 1 for fam in families):
            return assign
    return None


def random_graph(rng: random.Random, n: int, p: float):
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return n, edges
