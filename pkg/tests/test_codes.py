import numpy as np
import pytest

from romanesco.automaton import CARule, build_classical_code, enumerate_rules, min_weight_codeword
from romanesco.codes import (
    PolySpec,
    build_cylinder,
    build_from_polynomials,
    build_plane,
    build_torus,
    clifford_deform,
    commutes,
    polyspec_from_rules,
    rotate_180,
    sector_parity,
    symplectic_product,
    validate,
    weight2_filter,
)
from romanesco.gf2 import BitMatrix, rank, vstack

from conftest import BOWTIE, RULE102, RULE_K12, RULE_K16


def test_rotate_examples():
    assert rotate_180(CARule(3, ((1, 1),))) == CARule(3, ((1, 1),))
    assert set(rotate_180(BOWTIE).cells) == {(1, 2), (1, 1), (0, 1), (2, 0)}
    for m, w in ((2, 3), (3, 3), (3, 4)):
        for r in enumerate_rules(m, w):
            assert rotate_180(rotate_180(r)) == r


@pytest.mark.parametrize(
    "rule,H,n,k",
    [(RULE102, 3, 18, 4), (RULE_K12, 6, 72, 12), (RULE_K16, 6, 72, 16), (BOWTIE, 12, 288, 12)],
)
def test_torus_parameters(rule, H, n, k):
    code = build_torus(rule, rotate_180(rule), H, H)
    assert (code.n, code.k) == (n, k)
    assert code.h_x == code.h_z
    assert (code.h_x.dense.sum(axis=1) == 2 * rule.weight).all()
    assert code.h_x.rows == H * H
    assert commutes(code)


def test_polynomial_rowspace_equals_stencil():
    for rule, H in ((RULE_K12, 6), (BOWTIE, 12), (RULE102, 3)):
        a = build_torus(rule, rotate_180(rule), H, H)
        b = build_from_polynomials(polyspec_from_rules(rule, rotate_180(rule), H, H))
        r = rank(a.h_x)
        assert rank(b.h_x) == r == rank(vstack(a.h_x, b.h_x))
        assert b.k == a.k


def test_polynomial_identity_monomials():
    code = build_from_polynomials(PolySpec(((0, 0),), ((0, 0),), 3, 4))
    assert code.k == code.n - 2 * rank(code.h_x)
    assert commutes(code)


def test_deform_involution_and_k(code72):
    with pytest.warns(UserWarning):
        css = clifford_deform(code72)
    assert not css.deformed
    assert css.h_x == code72.h_x
    assert css.k == code72.k == 12
    assert np.array_equal(clifford_deform(css).stabilizers().dense, code72.stabilizers().dense)


def test_deformed_x_components_decouple(code72):
    n = code72.n
    S = code72.stabilizers().dense
    xs = S[:, :n]
    mx = code72.h_x.rows
    assert not xs[:mx][:, code72.gray].any()
    assert not xs[mx:][:, code72.black].any()


def test_deformed_stabilizers_commute(code72, plane34):
    for c in (code72, plane34):
        S = c.stabilizers().dense
        assert not symplectic_product(S, S).any()


def test_cylinder_families():
    c = build_cylinder(BOWTIE, rotate_180(BOWTIE), 4, 4)
    assert (c.n, c.k) == (24, 6)
    w = set(c.h_x.dense.sum(axis=1).tolist())
    assert w <= {6, 8} and 6 in w


@pytest.mark.parametrize("d,n,k,dc", [(5, 34, 2, 8), (8, 100, 4, 16), (12, 244, 4, 40)])
def test_plane_parameters(d, n, k, dc):
    c = build_plane(BOWTIE, rotate_180(BOWTIE), d)
    assert (c.n, c.k) == (n, k)
    weights = c.h_x.dense.sum(axis=1)
    assert set(weights.tolist()) == {4, 6, 8}
    assert (weights == 4).sum() == 2
    cd = clifford_deform(c)
    for sector in ("black", "gray"):
        dist, _ = min_weight_codeword(sector_parity(cd, sector))
        assert dist == dc
    assert c.gray_mask[-1] == 1 and c.gray_mask[-2] == 0


def test_validate_selected_rules():
    for rule, H in ((RULE_K12, 6), (RULE_K16, 6), (RULE_K12, 9), (RULE_K16, 9)):
        rep = validate(build_torus(rule, rotate_180(rule), H, H))
        assert rep.ok and rep.commutes and rep.weight2_ok


def test_mismatched_pair_fails_commutation():
    other = CARule(3, ((0, 0), (1, 0), (2, 2), (0, 1)))
    code = build_torus(BOWTIE, other, 6, 6)
    assert not validate(code).commutes


def test_trivial_code_commutes():
    from romanesco.codes import StabilizerCode

    z = BitMatrix.zeros(0, 1)
    code = StabilizerCode(z, z, np.zeros(1, np.uint8))
    assert commutes(code)
    assert validate(code).ok


def test_weight2_filter_rejects_shared_column():
    h = np.array([[1, 1, 0, 0], [0, 0, 1, 1]], np.uint8)
    from romanesco.codes import StabilizerCode

    bm = BitMatrix.from_dense(h)
    code = StabilizerCode(bm, bm, np.array([0, 0, 1, 1], np.uint8))
    assert weight2_filter(code)
    h2 = np.array([[1, 0, 1, 0], [0, 1, 0, 1]], np.uint8)
    bm2 = BitMatrix.from_dense(h2)
    assert not weight2_filter(StabilizerCode(bm2, bm2, np.array([0, 0, 1, 1], np.uint8)))


def test_sector_parity_matches_classical(code72):
    a = build_classical_code(RULE_K12, 6, 6).parity
    assert sector_parity(code72, "black") == a
    b = build_classical_code(rotate_180(RULE_K12), 6, 6).parity
    assert sector_parity(code72, "gray") == b
