import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from romanesco.analysis import (
    WeightProfile,
    code_distance,
    effective_distance,
    exact_distance_low_weight,
    logical_basis,
    normalizer_logicals,
    sample_logicals,
    symplectic_form,
    test_logicals as find_test_logicals,
    v_infinity,
)
from romanesco.automaton import build_classical_code
from romanesco.codes import build_plane, clifford_deform, rotate_180
from romanesco.gf2 import BitMatrix, mat_vec, rank, row_space_contains, vstack

from conftest import BOWTIE, RULE102, RULE_K12, torus

PROFILE_288 = {0: 54, 2: 36, 4: 24, 6: 12}


def test_distance_72(code72):
    d, w = code_distance(code72.h_x, code72.h_z)
    assert d == 4 == w.sum()
    assert not mat_vec(code72.h_x, w).any()
    assert not row_space_contains(code72.h_z, w)
    assert str(exact_distance_low_weight(code72, 4)) == "4"


def test_x_and_z_distance_agree(code72):
    assert code_distance(code72.h_x, code72.h_z)[0] == code_distance(code72.h_z, code72.h_x)[0]


def test_classical_mode():
    h = build_classical_code(RULE_K12, 6, 6).parity
    assert code_distance(h, BitMatrix.zeros(0, 36))[0] == 12
    rep = np.array([[1, 1, 0, 0, 0], [0, 1, 1, 0, 0], [0, 0, 1, 1, 0], [0, 0, 0, 1, 1]], np.uint8)
    assert code_distance(rep, BitMatrix.zeros(0, 5))[0] == 5


def test_no_logicals_raises():
    h = np.eye(3, dtype=np.uint8)
    with pytest.raises(ValueError):
        code_distance(h, h)


def test_test_logicals_outside_rowspace(code72):
    tests = find_test_logicals(code72.h_x, code72.h_z)
    stacked = vstack(code72.h_x, BitMatrix.from_dense(np.array(tests)))
    assert rank(stacked) - rank(code72.h_x) == code72.k
    for t in tests:
        assert not row_space_contains(code72.h_x, t)
        assert not mat_vec(code72.h_z, t).any()


def test_exact_examples(code18, code72):
    assert str(exact_distance_low_weight(code18, 4)) == "4"
    r = exact_distance_low_weight(code72, 3)
    assert str(r) == "≥ 4" and not r.exact
    c100 = build_plane(BOWTIE, rotate_180(BOWTIE), 8)
    assert str(exact_distance_low_weight(c100, 8)) == "8"


def test_profile_72(code72):
    prof = sample_logicals(code72)
    assert prof.get(0) == 12 and prof.get(2) == 4
    assert 1 not in prof.entries
    assert prof.distance == 4


def test_profile_plane_244():
    c = clifford_deform(build_plane(BOWTIE, rotate_180(BOWTIE), 12))
    prof = sample_logicals(c)
    assert prof.get(0) == 40 and prof.get(1) == 22
    assert prof.distance == 12


def test_profile_upper_bound_semantics():
    a = WeightProfile()
    a.add(0, 20)
    a.add(2, 8)
    snapshot = dict(a.entries)
    a.add(0, 25)
    a.add(2, 6)
    assert all(a.entries[s] <= snapshot[s] for s in snapshot)
    b = WeightProfile.from_dict({0: 18, 3: 9})
    assert a.merge(b).entries == b.merge(a).entries == {0: 18, 2: 6, 3: 9}


def test_profile_csv(tmp_path, code72):
    prof = WeightProfile.from_dict({0: 12, 2: 4})
    prof.write_csv(tmp_path / "p.csv", code72.code_id)
    lines = (tmp_path / "p.csv").read_text().splitlines()
    assert lines[0] == "code_id,s,L_s,n_samples"
    assert lines[1].split(",")[1:3] == ["0", "12"]


def test_effective_distance_examples():
    prof = WeightProfile.from_dict(PROFILE_288)
    assert effective_distance(prof, 1e-2, 1e3) == pytest.approx(21)
    assert effective_distance(prof, 0.1, 1.0) == 12
    assert effective_distance(prof, 0.1, math.inf) == 54
    with pytest.raises(ValueError):
        effective_distance(prof, 1.0, 10)


profiles = st.dictionaries(st.integers(0, 8), st.integers(1, 200), min_size=1)


@settings(max_examples=200, deadline=None)
@given(profiles, st.floats(1e-6, 0.49), st.lists(st.floats(1.0, 1e15), min_size=2, max_size=6))
def test_effective_distance_monotone_and_bounded(entries, p_z, etas):
    prof = WeightProfile.from_dict(entries)
    vals = [effective_distance(prof, p_z, e) for e in sorted(etas)]
    assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))
    d = min(entries.values())
    for v in vals:
        assert d - 1e-9 <= v
        if 0 in entries:
            assert v <= entries[0] + 1e-9


def test_v_infinity():
    assert v_infinity(12, 12, 72) == 2
    assert v_infinity(12, 54, 288) == Fraction(9, 4)
    assert v_infinity(1, 7, 7) == 1
    with pytest.raises(ValueError):
        v_infinity(1, 1, 0)


def _check_basis(code, basis):
    n = code.n
    S = code.stabilizers().dense
    k = code.k
    assert basis.k == k
    assert np.array_equal(basis.pairing(), np.eye(k, dtype=np.uint8))
    assert not symplectic_form(S, basis.x_logicals).any()
    assert not symplectic_form(S, basis.z_logicals).any()
    assert not symplectic_form(basis.z_logicals, basis.z_logicals).any()
    assert not symplectic_form(basis.x_logicals, basis.x_logicals).any()
    stab = code.stabilizers()
    full = vstack(stab, BitMatrix.from_dense(basis.x_logicals), BitMatrix.from_dense(basis.z_logicals))
    assert rank(full) == rank(stab) + 2 * k
    # Z logicals carry no X component in the frame of the code
    assert not basis.z_logicals[:, :n].any()


def test_logical_basis_72(code72):
    _check_basis(code72, logical_basis(code72))


def test_logical_basis_18_against_normalizer(code18):
    basis = logical_basis(code18)
    _check_basis(code18, basis)
    stab = code18.stabilizers()
    norm = normalizer_logicals(stab)
    # normalizer modulo stabilizers has dimension 2k and is spanned by the basis
    assert rank(vstack(stab, BitMatrix.from_dense(np.array(norm)))) - rank(stab) == 2 * code18.k
    span = vstack(stab, BitMatrix.from_dense(basis.x_logicals), BitMatrix.from_dense(basis.z_logicals))
    for v in norm:
        assert row_space_contains(span, v)


def test_logical_basis_plane(plane34):
    _check_basis(plane34, logical_basis(plane34))


def test_logical_basis_other_rules():
    _check_basis(torus(RULE102, 6, 6), logical_basis(torus(RULE102, 6, 6)))
