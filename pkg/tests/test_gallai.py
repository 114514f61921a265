import math
import random
from fractions import Fraction as F
from itertools import permutations, product

import pytest

from constel import (
    Template,
    berge_girth,
    enumerate_copies,
    enumerate_lines,
    find_mono_line,
    is_generalized_line,
    lift_gallai,
    proportional,
    sample_gamma,
    sparsify,
    verify_certificate,
    verify_ramsey,
    zeta,
)
from constel.budget import Budget
from constel.errors import BudgetExceeded, DimensionMismatch, TriesExhausted
from constel.gallai import (
    Constraint,
    GallaiCertificate,
    default_family,
    shortest_berge_cycle,
    with_delta,
)
from conftest import berge_girth_by_enumeration, copies_1d_by_subsets, ramsey_by_enumeration


def cube(m, n):
    return [tuple(p) for p in product(range(1, m + 1), repeat=n)]


def t1d(*values):
    return Template(tuple((F(v),) for v in values))


class TestLines:
    def test_counts(self):
        assert len(enumerate_lines(2, 1)) == 1
        assert len(enumerate_lines(2, 2)) == 5
        assert len(enumerate_lines(3, 2)) == 7
        for m, n in ((2, 3), (3, 3), (4, 2)):
            assert len(enumerate_lines(m, n)) == (m + 1) ** n - m**n

    def test_direct_listing_2x2(self):
        sets = {frozenset(l.points()) for l in enumerate_lines(2, 2)}
        assert sets == {
            frozenset({(1, 1), (2, 1)}),
            frozenset({(1, 2), (2, 2)}),
            frozenset({(1, 1), (1, 2)}),
            frozenset({(2, 1), (2, 2)}),
            frozenset({(1, 1), (2, 2)}),
        }

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            enumerate_lines(3, 12, Budget(max_enumeration=1000))

    def test_points_are_distinct_and_in_cube(self):
        for line in enumerate_lines(3, 2):
            pts = line.points()
            assert len(set(pts)) == 3
            assert all(1 <= c <= 3 for p in pts for c in p)


def brute_generalized(points, m, n):
    """Oracle: try every J, fixed assignment, and permutation tuple."""
    target = set(points)
    coords = list(range(n))
    for size in range(1, n + 1):
        for J in permutations(coords, size):
            J = set(J)
            fixed_positions = [c for c in coords if c not in J]
            for fixed_vals in product(range(1, m + 1), repeat=len(fixed_positions)):
                fixed = dict(zip(fixed_positions, fixed_vals))
                for perms in product(permutations(range(1, m + 1)), repeat=len(J)):
                    pj = dict(zip(sorted(J), perms))
                    built = set()
                    for i in range(1, m + 1):
                        built.add(
                            tuple(
                                pj[c][i - 1] if c in J else fixed[c] for c in coords
                            )
                        )
                    if built == target:
                        return True
    return False


class TestGeneralizedLines:
    def test_swap_line(self):
        assert is_generalized_line({(1, 2), (2, 1)}, 2)

    def test_ordinary_lines_are_generalized(self):
        for line in enumerate_lines(3, 2):
            assert is_generalized_line(set(line.points()), 3)

    def test_against_brute_force_m3_n2(self):
        pts = cube(3, 2)
        rng = random.Random(4)
        for _ in range(120):
            trio = tuple(rng.sample(pts, 3))
            assert is_generalized_line(set(trio), 3) == brute_generalized(trio, 3, 2)

    def test_against_brute_force_m2_n3(self):
        pts = cube(2, 3)
        rng = random.Random(6)
        for _ in range(80):
            duo = tuple(rng.sample(pts, 2))
            assert is_generalized_line(set(duo), 2) == brute_generalized(duo, 2, 3)


class TestRamsey:
    def test_2_2_holds(self):
        H = cube(2, 2)
        lines = enumerate_lines(2, 2)
        assert verify_ramsey(H, lines, 2).holds
        # oracle: all 16 colorings
        fams = [
            tuple(sorted(H.index(p) for p in l.points())) for l in enumerate_lines(2, 2)
        ]
        assert ramsey_by_enumeration(H, fams, 2) is None

    def test_3_2_fails_with_witness(self):
        H = cube(3, 2)
        lines = enumerate_lines(3, 2)
        rep = verify_ramsey(H, lines, 2)
        assert not rep.holds
        witness = rep.witness_coloring(H)
        assert find_mono_line(H, witness, lines) is None

    def test_k1_holds_when_line_present(self):
        H = cube(3, 1)
        assert verify_ramsey(H, enumerate_lines(3, 1), 1).holds

    def test_hole_breaks_every_line(self):
        H = [p for p in cube(2, 2) if p != (2, 2)]
        lines = enumerate_lines(2, 2)
        rep = verify_ramsey(H, lines, 1)
        # rows/columns through (1,1) survive, so k=1 still holds
        assert rep.holds
        H2 = [(1, 2), (2, 1)]
        assert not verify_ramsey(H2, lines, 1).holds

    def test_outcome_invariant_under_relabeling(self):
        H = cube(2, 2)
        lines = enumerate_lines(2, 2)
        rng = random.Random(3)
        base_outcome = verify_ramsey(H, lines, 2).holds
        for _ in range(5):
            shuffled = H[:]
            rng.shuffle(shuffled)
            assert verify_ramsey(shuffled, lines, 2).holds == base_outcome

    def test_witness_survives_color_permutation(self):
        H = cube(3, 2)
        lines = enumerate_lines(3, 2)
        rep = verify_ramsey(H, lines, 2)
        witness = rep.witness_coloring(H)
        for perm in ((1, 0), (0, 1)):
            relabeled = {p: perm[c] for p, c in witness.items()}
            assert find_mono_line(H, relabeled, lines) is None

    def test_mono_line_detection(self):
        H = cube(2, 2)
        lines = enumerate_lines(2, 2)
        constant = {p: 0 for p in H}
        assert find_mono_line(H, constant, lines) is not None
        proper = {(1, 1): 0, (2, 2): 1, (1, 2): 1, (2, 1): 1}
        found = find_mono_line(H, proper, lines)
        assert found is not None  # the row {(1,2),(2,2)} is monochromatic
        # every line loses a point once (1,1) and (2,2) are gone
        broken = {(1, 2): 0, (2, 1): 0}
        assert find_mono_line(set(broken), broken, lines) is None


class TestSparsify:
    def test_vacuous_girth(self):
        H = cube(2, 2)
        rep = sparsify(H, 2, 2, 2, 1)
        assert set(rep.points) == set(H) and rep.removed == ()

    def test_g4_removes_points(self):
        rep = sparsify(cube(2, 2), 2, 2, 4, 1)
        assert rep.berge >= 4
        pts = set(rep.points)
        lines = [l for l in enumerate_lines(2, 2) if all(p in pts for p in l.points())]
        assert verify_ramsey(pts, lines, 1).holds
        assert berge_girth([l.points() for l in lines]) >= 4

    def test_non_ramsey_input_rejected(self):
        with pytest.raises(ValueError):
            sparsify(cube(3, 2), 3, 2, 2, 2)

    def test_three_letter_cube_g4(self):
        rep = sparsify(cube(3, 2), 3, 2, 4, 1)
        assert rep.berge >= 4 and rep.removed
        pts = set(rep.points)
        lines = [l for l in enumerate_lines(3, 2) if all(p in pts for p in l.points())]
        assert verify_ramsey(pts, lines, 1).holds
        assert berge_girth([l.points() for l in lines]) >= 4


class TestZetaAndGamma:
    def test_zeta_basics(self):
        tpl = t1d(0, 1, 2)
        assert zeta((F(1), F(0)), (2, 1), tpl) == (F(1),)
        assert zeta((F(0), F(0)), (3, 3), tpl) == (F(0),)
        assert zeta((F(1), F(1)), (1, 2), tpl) == (F(1),)
        with pytest.raises(DimensionMismatch):
            zeta((F(1),), (1, 2), tpl)

    def test_single_point_accepts_any_gamma(self):
        tpl = t1d(0, 1, 2)
        gamma = sample_gamma(2, tpl, [(1, 1)], default_family(), seed=0)
        assert all(g > 0 for g in gamma)

    def test_delta_only_one_dim(self):
        tpl = t1d(0, 1, 2)
        gamma = sample_gamma(1, tpl, cube(3, 1), default_family(), seed=1)
        vals = {zeta(gamma, x, tpl) for x in cube(3, 1)}
        assert len(vals) == 3

    def test_adversarial_constraint(self):
        tpl = t1d(0, 1, 2)
        zero = Constraint("always-zero", lambda p, q: F(0))
        with pytest.raises(TriesExhausted):
            sample_gamma(1, tpl, cube(3, 1), (zero,), seed=0, max_tries=10)

    def test_deterministic_per_seed(self):
        tpl = t1d(0, 1, 2)
        g1 = sample_gamma(2, tpl, cube(3, 2), default_family(), seed=42)
        g2 = sample_gamma(2, tpl, cube(3, 2), default_family(), seed=42)
        assert g1 == g2


class TestLift:
    def test_single_coordinate_cube(self):
        tpl = t1d(0, 1, 2)
        H = cube(3, 1)
        lines = enumerate_lines(3, 1)
        cert = lift_gallai(tpl, (), H, lines, 1, 2, seed=0)
        assert len(cert.X) == 3 and len(cert.copies) == 1
        assert cert.copies[0].map.scale == cert.lift.gamma[0] > 0

    def test_full_3x2(self):
        tpl = t1d(0, 1, 2)
        H = cube(3, 2)
        lines = enumerate_lines(3, 2)
        cert = lift_gallai(tpl, (), H, lines, 1, 2, seed=0)
        assert len(cert.X) == 9  # delta forces injectivity
        assert len(cert.copies) == 7
        # copy geometry: every copy is a proper homothetic image
        for copy, line in zip(cert.copies, lines):
            assert proportional(copy.points, tpl, allow_degenerate=False)
            assert copy.map.scale == sum(cert.lift.gamma[i] for i in line.active)
        # cycle transfer: image incidence structure is preserved exactly
        assert berge_girth([c.points for c in cert.copies]) >= berge_girth(
            [l.points() for l in lines]
        )

    def test_lifting_soundness(self):
        tpl = t1d(0, 1, 2)
        H = cube(3, 2)
        lines = enumerate_lines(3, 2)
        cert = lift_gallai(tpl, (), H, lines, 1, 2, seed=5)
        rep = verify_certificate(cert)
        assert rep.constraints_ok and rep.coloring_ok

    def test_line_outside_H_rejected(self):
        tpl = t1d(0, 1, 2)
        H = [p for p in cube(3, 2) if p != (1, 1)]
        with pytest.raises(ValueError):
            lift_gallai(tpl, (), H, enumerate_lines(3, 2), 1, 2)

    def test_stray_copy_rejection_asymmetric_template(self):
        """Without a central symmetry in the template, the only copies inside
        the lifted set are the images of the ordinary lines."""
        tpl = Template(((F(0), F(0)), (F(1), F(2)), (F(2), F(1))))
        H = cube(3, 2)
        lines = enumerate_lines(3, 2)
        cert = lift_gallai(tpl, (), H, lines, 1, 2, seed=3, forbid_stray_copies=True)
        all_copies = enumerate_copies(cert.X, tpl)
        assert {frozenset(c.points) for c in all_copies} == {
            frozenset(c.points) for c in cert.copies
        }
        rep = verify_certificate(cert, check_all_copies=True)
        assert rep.ok and rep.n_copies_checked == 7

    def test_stray_copy_rejection_symmetric_template(self):
        """A centrally symmetric template admits reversal lines, so the lifted
        set carries more copies than the recorded ones — but with stray-copy
        rejection every one of them pulls back to a generalized line."""
        tpl = t1d(0, 1, 2)
        H = cube(3, 2)
        lines = enumerate_lines(3, 2)
        cert = lift_gallai(tpl, (), H, lines, 1, 2, seed=5, forbid_stray_copies=True)
        preimage = dict(zip(cert.X, sorted(H)))
        all_copies = enumerate_copies(cert.X, tpl)
        recorded = {frozenset(c.points) for c in cert.copies}
        assert recorded <= {frozenset(c.points) for c in all_copies}
        assert len(all_copies) > len(recorded)  # reversal-mix lines appear
        for c in all_copies:
            assert is_generalized_line({preimage[p] for p in c.points}, 3)
        rep = verify_certificate(cert, check_all_copies=True)
        assert rep.girth_ok and rep.coloring_ok


class TestProportional:
    def test_identity(self):
        tpl = Template(((F(0), F(1)), (F(2), F(3)), (F(4), F(0))))
        assert proportional(tpl.points, tpl)

    def test_constant_needs_degenerate(self):
        tpl = t1d(0, 1, 2)
        const = ((F(5),), (F(5),), (F(5),))
        assert proportional(const, tpl, allow_degenerate=True)
        assert not proportional(const, tpl, allow_degenerate=False)

    def test_negative_scale(self):
        tpl = t1d(0, 1, 2)
        flipped = ((F(4),), (F(2),), (F(0),))
        assert proportional(flipped, tpl, allow_degenerate=True)
        assert not proportional(flipped, tpl)

    def test_exhaustive_small_1d_against_ratio_oracle(self):
        tpl = t1d(0, 1, 3)

        def oracle(vals):
            # brute-force scale search over the finitely many candidate ratios
            p1, p2, p3 = vals
            for lam_num, lam_den in {(p2 - p1, 1), (p3 - p1, 3)}:
                lam = F(lam_num, lam_den)
                if p2 - p1 == lam * 1 and p3 - p1 == lam * 3:
                    return lam > 0
            return False

        for vals in product(range(-3, 4), repeat=3):
            pts = tuple((F(v),) for v in vals)
            assert proportional(pts, tpl) == oracle(vals), vals


class TestEnumerateCopies:
    def test_exact_image_only(self):
        tpl = t1d(0, 1, 2)
        X = [(F(10),), (F(12),), (F(14),)]
        copies = enumerate_copies(X, tpl)
        assert len(copies) == 1
        assert copies[0].map.scale == 2

    def test_ap_count_in_1_to_9(self):
        tpl = t1d(0, 1, 2)
        X = [(F(i),) for i in range(1, 10)]
        assert len(enumerate_copies(X, tpl)) == 16  # 7+5+3+1 by direct count

    def test_too_small(self):
        tpl = t1d(0, 1, 2)
        assert enumerate_copies([(F(1),), (F(2),)], tpl) == ()

    def test_against_subset_oracle_random(self):
        rng = random.Random(21)
        tpl_vals = (0, 1, 2)
        tpl = t1d(*tpl_vals)
        for trial in range(50):
            size = rng.randint(3, 12)
            vals = rng.sample(range(-20, 21), size)
            X = [(F(v),) for v in vals]
            got = {frozenset(v[0] for v in c.points) for c in enumerate_copies(X, tpl)}
            want = copies_1d_by_subsets([F(v) for v in vals], [F(v) for v in tpl_vals])
            assert got == want, (trial, vals)

    def test_three_dimensional_copies(self):
        tpl = Template(((F(0), F(0), F(1)), (F(2), F(0), F(1)), (F(1), F(3, 4), F(1, 4))))
        h_pts = tuple(
            tuple(F(3) + 2 * c for c in p) for p in tpl.points
        )  # shift (3,3,3), scale 2
        X = list(tpl.points) + list(h_pts)
        copies = enumerate_copies(X, tpl)
        sets = {frozenset(c.points) for c in copies}
        assert frozenset(tpl.points) in sets and frozenset(h_pts) in sets


class TestBergeGirth:
    def test_two_sets_sharing_two(self):
        assert berge_girth([{1, 2, 3}, {2, 3, 4}]) == 2

    def test_triangle(self):
        assert berge_girth([{1, 2}, {2, 3}, {3, 1}]) == 3

    def test_disjoint(self):
        assert berge_girth([{1, 2}, {3, 4}, {5}]) == math.inf

    def test_witness_is_consistent(self):
        cyc = shortest_berge_cycle([{1, 2, 3}, {3, 4, 5}, {5, 6, 1}])
        assert cyc is not None and cyc[0] == 3
        assert len(set(cyc[1])) == len(cyc[1]) == 3

    def test_against_enumeration_oracle(self):
        rng = random.Random(33)
        for trial in range(50):
            n_sets = rng.randint(2, 8)
            universe = list(range(rng.randint(3, 9)))
            fam = [
                frozenset(rng.sample(universe, rng.randint(2, min(4, len(universe)))))
                for _ in range(n_sets)
            ]
            assert berge_girth(fam) == berge_girth_by_enumeration(fam), (trial, fam)


class TestVerifyCertificate:
    def _ap_cert(self, n_points, k):
        tpl = t1d(0, 1, 2)
        X = tuple((F(i),) for i in range(1, n_points + 1))
        copies = enumerate_copies(X, tpl)
        return GallaiCertificate(
            template=tpl, X=X, copies=copies, k=k, g=2, constraints=default_family()
        )

    def test_nine_point_progression_passes(self):
        rep = verify_certificate(self._ap_cert(9, 2))
        assert rep.ok and rep.berge == 2
        # oracle: literally all 512 colorings
        idx_fams = [
            tuple(int(p[0]) - 1 for p in c.points) for c in self._ap_cert(9, 2).copies
        ]
        assert ramsey_by_enumeration(list(range(9)), idx_fams, 2) is None

    def test_eight_point_truncation_fails_with_witness(self):
        cert = self._ap_cert(8, 2)
        rep = verify_certificate(cert)
        assert not rep.coloring_ok and rep.coloring_witness is not None
        witness = rep.coloring_witness
        for c in cert.copies:
            ids = [int(p[0]) - 1 for p in c.points]
            assert len({witness[i] for i in ids}) > 1

    def test_check_all_copies_equals_recorded_for_progressions(self):
        cert = self._ap_cert(9, 2)
        rep = verify_certificate(cert, check_all_copies=True)
        assert rep.n_copies_checked == 16 and rep.ok

    def test_empty_constraint_family_vacuous(self):
        tpl = t1d(0, 1, 2)
        X = tuple((F(i),) for i in range(1, 4))
        cert = GallaiCertificate(
            template=tpl,
            X=X,
            copies=enumerate_copies(X, tpl),
            k=1,
            g=2,
            constraints=(),
        )
        assert verify_certificate(cert).constraints_ok

    def test_delta_injectivity(self):
        tpl = t1d(0, 1, 2)
        H = cube(3, 2)
        cert = lift_gallai(tpl, (), H, enumerate_lines(3, 2), 1, 2, seed=9)
        assert len(cert.X) == len(H)
        assert any(c.name == "delta" for c in cert.constraints)


def test_with_delta_prepends_once():
    fam = with_delta(())
    assert [c.name for c in fam] == ["delta"]
    fam2 = with_delta(fam)
    assert [c.name for c in fam2] == ["delta"]
