"""Certificate providers: ways of satisfying a (template, constraints, g, k)
request.

* full-cube — smallest cube proven k-Ramsey by exhaustive search, lifted;
  offers no cycle sparsity beyond what cubes give (Berge girth 3).
* sparsify — full cube thinned by the greedy cycle-breaking surrogate.
* ap-1d — 1-D templates hosted inside an integer progression, grown until
  the coloring search proves the Ramsey property.
* import — a certificate file, re-verified on load against the request.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .budget import DEFAULT_BUDGET, Budget
from .coloring import find_avoiding_coloring
from .errors import ProviderFailed, SurrogateFailed
from .gallai import (
    GallaiCertificate,
    Template,
    berge_girth,
    enumerate_copies,
    enumerate_lines,
    family_respects,
    lift_gallai,
    sparsify,
    verify_ramsey,
    with_delta,
)


def _cube_points(m: int, n: int):
    return [tuple(p) for p in product(range(1, m + 1), repeat=n)]


def full_cube_provider(
    template: Template, constraints, g: int, k: int, seed: int = 0,
    budget: Budget = DEFAULT_BUDGET,
) -> GallaiCertificate:
    """Search n upward until [m]^n is k-Ramsey (proved exhaustively), lift."""
    m = template.m
    if m < 2:
        raise ProviderFailed("cube lifting needs a template with at least 2 points")
    for n in range(1, budget.max_cube_dim + 1):
        H = _cube_points(m, n)
        lines = enumerate_lines(m, n, budget)
        report = verify_ramsey(H, lines, k, budget)
        if not report.holds:
            continue
        bg = berge_girth([ln.points() for ln in lines])
        if bg < g:
            # lifting is injective, so the copy family inherits this girth
            raise ProviderFailed(
                f"full cube gives Berge girth {bg} < {g}; use sparsify or import"
            )
        return lift_gallai(template, constraints, H, lines, k, g, seed=seed)
    raise ProviderFailed(
        f"no k-Ramsey cube up to dimension {budget.max_cube_dim} for m={m}, k={k}"
    )


def sparsify_provider(
    template: Template, constraints, g: int, k: int, seed: int = 0,
    budget: Budget = DEFAULT_BUDGET,
) -> GallaiCertificate:
    """Full cube followed by greedy cycle-breaking down to Berge girth g."""
    m = template.m
    if m < 2:
        raise ProviderFailed("cube lifting needs a template with at least 2 points")
    for n in range(1, budget.max_cube_dim + 1):
        H = _cube_points(m, n)
        lines = enumerate_lines(m, n, budget)
        if not verify_ramsey(H, lines, k, budget).holds:
            continue
        try:
            thinned = sparsify(H, m, n, g, k, budget)
        except SurrogateFailed as exc:
            raise ProviderFailed(f"sparsify surrogate failed at n={n}: {exc}") from exc
        pts = set(thinned.points)
        inside = [ln for ln in lines if all(p in pts for p in ln.points())]
        return lift_gallai(template, constraints, thinned.points, inside, k, g, seed=seed)
    raise ProviderFailed(
        f"no k-Ramsey cube up to dimension {budget.max_cube_dim} for m={m}, k={k}"
    )


def ap1d_provider(
    template: Template, constraints, g: int, k: int, seed: int = 0,
    budget: Budget = DEFAULT_BUDGET,
) -> GallaiCertificate:
    """Host copies of a 1-D template inside {1..N}, growing N until every
    k-coloring is proven to contain a monochromatic copy."""
    if template.d != 1:
        raise ProviderFailed("the progression provider handles 1-D templates only")
    family = with_delta(constraints)
    span = max(p[0] for p in template.points) - min(p[0] for p in template.points)
    start = max(template.m, 3)
    for n_pts in range(start, budget.max_ap_points + 1):
        X = tuple((Fraction(i),) for i in range(1, n_pts + 1))
        copies = enumerate_copies(X, template, budget)
        if not copies:
            continue
        bg = berge_girth([c.points for c in copies])
        if bg < g:
            # more points only add copies, so the girth cannot recover
            raise ProviderFailed(
                f"progression copies have Berge girth {bg} < {g} already at N={n_pts}"
            )
        idx = {p: i for i, p in enumerate(X)}
        families = [tuple(idx[p] for p in c.points) for c in copies]
        res = find_avoiding_coloring(len(X), families, k, budget)
        if res.exhausted:
            bad = family_respects(family, X)
            if bad is not None:
                raise ProviderFailed(f"constraint {bad[0]} vanishes on the progression")
            return GallaiCertificate(
                template=template, X=X, copies=copies, k=k, g=g, constraints=family
            )
    raise ProviderFailed(
        f"no k-Ramsey progression up to {budget.max_ap_points} points "
        f"(template span {span})"
    )


def make_import_provider(cert: GallaiCertificate):
    """Wrap a loaded certificate; re-verified against each request."""

    def provider(template, constraints, g, k, seed=0, budget=DEFAULT_BUDGET):
        if cert.template != template:
            raise ProviderFailed("imported certificate is for a different template")
        if cert.k < k:
            raise ProviderFailed(f"imported certificate proves only k={cert.k} < {k}")
        bad = family_respects(with_delta(constraints), cert.X)
        if bad is not None:
            raise ProviderFailed(
                f"constraint {bad[0]} vanishes on the imported point set"
            )
        bg = berge_girth([c.points for c in cert.copies])
        if bg < g:
            raise ProviderFailed(f"imported copies have Berge girth {bg} < {g}")
        idx = cert.x_index()
        families = [tuple(idx[p] for p in c.points) for c in cert.copies]
        if not find_avoiding_coloring(len(cert.X), families, k, budget).exhausted:
            raise ProviderFailed("imported certificate fails the coloring property")
        return cert

    return provider


PROVIDERS = {
    "hj-lift": full_cube_provider,
    "sparsify": sparsify_provider,
    "ap-1d": ap1d_provider,
}
