from fractions import Fraction as F

import pytest

from constel import Template, berge_girth, extract_template, tangency_constraints, verify_certificate
from constel.budget import Budget
from constel.errors import ProviderFailed
from constel.gallai import default_family
from constel.providers import (
    ap1d_provider,
    full_cube_provider,
    make_import_provider,
    sparsify_provider,
)


def t1d(*values):
    return Template(tuple((F(v),) for v in values))


class TestFullCube:
    def test_k1_single_line(self):
        cert = full_cube_provider(t1d(0, 1, 2), default_family(), 1, 1)
        assert len(cert.X) == 3 and len(cert.copies) == 1
        assert cert.lift.n == 1
        assert verify_certificate(cert).ok

    def test_m2_k2_lands_on_dimension_two(self):
        tpl = Template(((F(0), F(0), F(1)), (F(2), F(0), F(1))))
        cert = full_cube_provider(tpl, tangency_constraints(), 2, 2, seed=1)
        assert cert.lift.n == 2 and len(cert.X) == 4
        rep = verify_certificate(cert)
        assert rep.ok

    def test_m3_k2_lands_on_dimension_four(self, triangle):
        tpl = extract_template(triangle)
        cert = full_cube_provider(tpl, tangency_constraints(), 1, 2, seed=0)
        assert cert.lift.n == 4 and len(cert.X) == 81 and len(cert.copies) == 175

    def test_girth_demand_beyond_cubes_fails(self):
        # any k-Ramsey cube with k >= 2 contains Berge 3-cycles of lines
        tpl = Template(((F(0), F(0), F(1)), (F(2), F(0), F(1))))
        with pytest.raises(ProviderFailed):
            full_cube_provider(tpl, default_family(), 4, 2)

    def test_dimension_budget(self):
        with pytest.raises(ProviderFailed):
            full_cube_provider(t1d(0, 1), default_family(), 2, 9, Budget(max_cube_dim=2))


class TestSparsify:
    def test_meets_higher_girth_than_full_cube(self):
        cert = sparsify_provider(t1d(0, 1), default_family(), 4, 1, seed=0)
        assert berge_girth([c.points for c in cert.copies]) >= 4
        assert verify_certificate(cert).ok


class TestAp1d:
    def test_classic_nine_points(self):
        cert = ap1d_provider(t1d(0, 1, 2), default_family(), 2, 2)
        assert len(cert.X) == 9 and len(cert.copies) == 16
        assert verify_certificate(cert).ok

    def test_symmetric_template_same_threshold(self):
        cert = ap1d_provider(t1d(-1, 0, 1), default_family(), 2, 2)
        assert len(cert.X) == 9 and len(cert.copies) == 16

    def test_wider_template(self):
        cert = ap1d_provider(t1d(0, 1, 3), default_family(), 2, 1)
        assert len(cert.copies) >= 1
        assert verify_certificate(cert).ok

    def test_rejects_multidimensional_template(self):
        tpl = Template(((F(0), F(0)), (F(1), F(1))))
        with pytest.raises(ProviderFailed):
            ap1d_provider(tpl, default_family(), 2, 1)

    def test_girth_demand_fails_fast(self):
        with pytest.raises(ProviderFailed):
            ap1d_provider(t1d(0, 1, 2), default_family(), 3, 2)


class TestImport:
    def test_roundtrip_accept(self):
        cert = ap1d_provider(t1d(0, 1, 2), default_family(), 2, 2)
        provider = make_import_provider(cert)
        again = provider(cert.template, default_family(), 2, 2)
        assert again is cert

    def test_template_mismatch(self):
        cert = ap1d_provider(t1d(0, 1, 2), default_family(), 2, 2)
        provider = make_import_provider(cert)
        with pytest.raises(ProviderFailed):
            provider(t1d(0, 1, 3), default_family(), 2, 2)

    def test_insufficient_colors(self):
        cert = ap1d_provider(t1d(0, 1, 2), default_family(), 2, 1)
        provider = make_import_provider(cert)
        with pytest.raises(ProviderFailed):
            provider(cert.template, default_family(), 2, 2)

    def test_girth_shortfall(self):
        cert = ap1d_provider(t1d(0, 1, 2), default_family(), 2, 2)
        provider = make_import_provider(cert)
        with pytest.raises(ProviderFailed):
            provider(cert.template, default_family(), 5, 2)
