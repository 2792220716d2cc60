import numpy as np
import pytest

from oracles import dense_rank
from symatch import gf2
from symatch.code import build_code
from symatch.lattice import LatticePoly
from symatch.registry import ENTRIES, get_code
from symatch.symmetry import (DependentSet, NotASymmetry, NoPowerOfTwoOrder, all_combinations,
                              discover_subsymmetries, discover_symmetries_gauss,
                              discover_symmetries_kernel, even_parity_ok, infinite_symmetry,
                              is_subsymmetry, is_symmetry, span_equal, symmetry_count,
                              symmetry_from_poly, translated_generating_set)

SIGMA = "(x + y^2 + x^2*y)(1 + x^6)(1 + y^2)B"
TRANSLATIONS = [(0, 0), (0, 1), (3, 0), (2, 3), (3, 3), (4, -1)]


def gross_sigma(code):
    s = code.shape
    p = (LatticePoly.parse("x + y^2 + x^2*y", s) * LatticePoly.parse("1 + x^6", s)
         * LatticePoly.parse("1 + y^2", s) * code.B)
    return symmetry_from_poly(code, p)


def registry_codes():
    return [get_code(e.name if e.family_size is None else f"{e.name}{e.family_size}") for e in ENTRIES]


def test_gross_has_six(gross):
    gauss = discover_symmetries_gauss(gross)
    kern = discover_symmetries_kernel(gross)
    assert len(gauss) == len(kern) == 6 == symmetry_count(gross)
    stack = lambda syms: np.array([s.sites for s in syms])  # noqa: E731
    assert span_equal(stack(gauss), stack(kern))
    for s in gauss:
        assert is_symmetry(gross, s.sites) and s.size > 0


def test_toric_symmetry_is_all_checks(toric4):
    (s,) = discover_symmetries_gauss(toric4)
    assert s.sites.all()
    (k,) = discover_symmetries_kernel(toric4)
    assert k.sites.all()


def test_gt98_count():
    # MN - rank(H_Z) = 49 - 46 = 3, so K = k/2 = 3
    code = get_code("GT98")
    assert len(discover_symmetries_kernel(code)) == 3


def test_gross_sigma_and_translates(gross):
    sigma = gross_sigma(gross)
    assert sigma.size == 36
    gens = translated_generating_set(sigma, TRANSLATIONS)
    assert len(gens) == 6
    assert np.array_equal(gens[0].sites, sigma.sites)
    assert dense_rank(np.array([g.sites for g in gens])) == 6
    sizes = {c.size for c in all_combinations(gens)}
    assert {32, 36, 48} <= sizes
    assert len(all_combinations(gens)) == 63


def test_printed_a_form_is_not_a_symmetry(gross):
    s = gross.shape
    p = (LatticePoly.parse("x + y^2 + x^2*y", s) * LatticePoly.parse("1 + x^6", s)
         * LatticePoly.parse("1 + y^2", s) * gross.A)
    with pytest.raises(NotASymmetry):
        symmetry_from_poly(gross, p)


def test_dependent_translates_rejected(gross):
    with pytest.raises(DependentSet):
        translated_generating_set(gross_sigma(gross), [(0, 0), (0, 0)])


def test_subsymmetries(gross):
    s = gross.shape
    sr = (LatticePoly.parse("1 + x^6", s) * LatticePoly.parse("1 + y^2", s) * gross.B).to_site_vector()
    sl = (LatticePoly.parse("1 + x^6", s) * LatticePoly.parse("1 + x^2", s) * gross.A).to_site_vector()
    R = np.array([x.sites for x in discover_subsymmetries(gross, "R")])
    L = np.array([x.sites for x in discover_subsymmetries(gross, "L")])
    assert gf2.in_rowspace(R, sr) and is_subsymmetry(gross, "R", sr)
    assert gf2.in_rowspace(L, sl) and is_subsymmetry(gross, "L", sl)
    # a right flip hits every R-subsymmetry an even number of times
    for q in range(72, 144):
        assert not (gf2.matmul_mod2(R, gross.hz_dense[:, q]) % 2).any()
    with pytest.raises(ValueError):
        discover_subsymmetries(gross, "Q")


def test_infinite_symmetry():
    toric = get_code("TC4")
    (s,) = infinite_symmetry(toric)
    assert s.sites.all()
    trivial = build_code("1 + x", "1 + y", (1, 1, 0))
    (t,) = infinite_symmetry(trivial)
    assert t.sites.tolist() == [1]
    with pytest.raises(NoPowerOfTwoOrder):
        infinite_symmetry(get_code("LC162"))


@pytest.mark.parametrize("code", registry_codes(), ids=lambda c: c.name)
def test_single_flips_even_parity(code):
    gens = discover_symmetries_gauss(code)
    assert even_parity_ok(code, gens)
