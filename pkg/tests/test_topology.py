import numpy as np
import pytest

from symatch import gf2
from symatch.lattice import TorusShape
from symatch.registry import get_code
from symatch.topology import (Frame, OrderSearchExceeded, RegionTooSmall, RibbonRegion, TorusTooLarge,
                              _analyse_at, _order, anyon_analysis, stabilizer_diameter, string_segments,
                              symmetry_counts, unfrustrated_torus)

TORIC = (((0, 0), (1, 0)), ((0, 0), (0, 1)))
TWO_COPY = (((0, 0), (2, 0)), ((0, 0), (0, 1)))


def test_frame_shift():
    f = Frame(0, 0, 4, 3)
    v = np.zeros(f.n, np.uint8)
    v[f.index(0, 1, 1)] = 1
    out = f.shift(v, 2, 1)
    assert np.flatnonzero(out).tolist() == [f.index(0, 3, 2)]
    with pytest.raises(RegionTooSmall):
        f.shift(v, 3, 0)


def test_ribbon_validation():
    with pytest.raises(ValueError):
        RibbonRegion("diagonal", 3, 3, 1)
    with pytest.raises(ValueError):
        RibbonRegion("horizontal", 3, -1, 1)


def test_empty_region_has_no_segments():
    seg = string_segments(TORIC, RibbonRegion("horizontal", 0, 3, 1))
    assert seg.shape[0] == 0


def test_region_too_small():
    with pytest.raises(RegionTooSmall):
        string_segments(TORIC, RibbonRegion("horizontal", 9, 1, 1))


def test_toric_horizontal_ribbon_has_straight_string():
    region = RibbonRegion("horizontal", 9, 3, 1)
    frame = Frame(-1, -1, 11, 5)
    seg = string_segments(TORIC, region, frame)
    assert seg.shape[0] >= 1
    # a full row of left qubits commutes with every enforced check
    row = np.zeros(frame.n, np.uint8)
    for x in range(9):
        row[frame.index(0, x, 1)] = 1
    assert gf2.in_rowspace(seg, row)


def test_toric():
    b = anyon_analysis(TORIC)
    assert (b.K, b.Rx, b.Ry) == (1, 1, 1)
    for shape in (TorusShape(3, 3), TorusShape(4, 5), TorusShape(6, 2)):
        assert sum(symmetry_counts(*TORIC, shape)) == 2


def test_two_copies():
    b = anyon_analysis(TWO_COPY)
    assert b.K == 2
    # x swaps the two copies
    assert (b.Rx, b.Ry) == (2, 1)


@pytest.mark.parametrize("name", ["TC4", "CC6", "gross", "D36", "LC162"])
def test_basis_invariants(name):
    code = get_code(name)
    b = anyon_analysis(code)
    eye = np.eye(b.K, dtype=np.uint8)
    assert np.array_equal(gf2.matmul_mod2(b.s_h, b.s_v.T), eye)
    assert np.array_equal(gf2.matmul_mod2(b.Px, b.Py), gf2.matmul_mod2(b.Py, b.Px))
    assert np.array_equal(np.linalg.matrix_power(b.Px.astype(np.int64), b.Rx) % 2, eye)
    # stable: one more width gives the same K
    r = max(stabilizer_diameter(code.a_terms, code.b_terms), 1)
    nxt = _analyse_at(code.a_terms, code.b_terms, b.width + 1, 3 * (b.width + 1), r, 4096)
    assert nxt.K == b.K


def test_gross_values():
    # frozen: eight string types with period 12 in both directions
    b = anyon_analysis(get_code("gross"))
    assert (b.K, b.Rx, b.Ry) == (8, 12, 12)
    rep = unfrustrated_torus(get_code("gross"), b)
    assert rep.shape == TorusShape(12, 12, 0)
    assert rep.unfrustrated and rep.z_symmetries == 8
    # the native torus is frustrated
    gross = get_code("gross")
    assert symmetry_counts(gross.a_terms, gross.b_terms, gross.shape) == (6, 6)


def test_torus_too_large():
    with pytest.raises(TorusTooLarge):
        unfrustrated_torus(get_code("GT98"))


def test_order_cap():
    P = np.array([[0, 1], [1, 0]], np.uint8)
    assert _order(P, 10) == 2
    with pytest.raises(OrderSearchExceeded):
        _order(P, 1)
