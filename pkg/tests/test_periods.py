"""Numeric and exact period matrices."""
import cmath
import math

import numpy as np
import pytest

from trigsurf.constants import LatticeConstants
from trigsurf.cycles import COLUMN_LABELS, generate_all_cycles
from trigsurf.errors import DomainError, MismatchError
from trigsurf.exact import E3, E23, I, ONE, S3, QiSqrt3, SymbolicScalar, identity
from trigsurf.periods import (assemble_period_matrix, closed_form_periods, closed_form_numeric,
                              period_numeric, period_vector, period_via_pullback, pullback_power,
                              symbolic_period_matrix, verify_beta_gamma_relation)
from trigsurf import reference
from conftest import ALPHA, BETA, GAMMA

C1 = 1 + cmath.exp(1j * math.pi / 3)


@pytest.fixture(scope="module")
def cycles():
    return generate_all_cycles()


def test_A1_first_component(cycles):
    value = period_numeric(cycles["A1"], 1)
    assert abs(value - C1 * ALPHA) < 1e-10
    assert abs(value - (1.5 + 0.5j * math.sqrt(3)) * ALPHA) < 1e-10


def test_A1_second_and_fourth_components(cycles):
    assert abs(period_numeric(cycles["A1"], 2) + C1 * ALPHA) < 1e-10
    assert abs(period_numeric(cycles["A1"], 4) + 1j * C1 * GAMMA) < 1e-10


def test_A1_third_component_uses_beta(cycles):
    assert abs(period_numeric(cycles["A1"], 3) - 1j * C1 * BETA) < 1e-10


@pytest.mark.parametrize("base", ["A1", "A2"])
def test_closed_forms_match_direct_integration(cycles, base):
    direct, err = period_vector(cycles[base])
    assert err < 1e-10
    assert np.max(np.abs(direct - closed_form_numeric(base))) < 1e-8


def test_component_out_of_range(cycles):
    with pytest.raises(DomainError):
        period_numeric(cycles["A1"], 5)


def test_closed_form_unknown_base():
    with pytest.raises(DomainError):
        closed_form_periods("B1")


def test_pullback_identity_and_order():
    for k in (0, 12):
        scalar, block = pullback_power(k)
        assert scalar == ONE
        assert block == identity(4, QiSqrt3(1), QiSqrt3(0))
    base = closed_form_periods("A1")
    assert period_via_pullback(base, 0) == base
    assert period_via_pullback(base, 12) == base
    with pytest.raises(DomainError):
        period_via_pullback(base, 13)


def test_B5_third_component():
    # B5 = phi^5(A1); with beta = sqrt(3) gamma the entry is -i(e^{i pi/3}+e^{2 pi i/3}) sqrt(3) gamma
    value = period_via_pullback(closed_form_periods("A1"), 5)[2]
    assert value == SymbolicScalar(gamma=-I * (E3 + E23) * S3)


def test_beta_gamma_relation():
    relation = verify_beta_gamma_relation()
    assert relation.constant_residual < 1e-10
    assert relation.direct_vs_closed < 1e-8
    assert relation.direct_vs_transport < 1e-8


def test_symbolic_matrix_is_published_matrix():
    sym = symbolic_period_matrix()
    assert len(sym) == 4 and all(len(r) == 20 for r in sym)
    assert sym == reference.omega_matrix()


def test_block_shapes():
    blocks = reference.omega_blocks()
    assert [len(b) for b in blocks] == [3] * 6 + [2]


def test_first_column(period_matrix):
    col = [row[0] for row in period_matrix.symbolic]
    c = ONE + E3
    assert col == [SymbolicScalar(alpha=c), SymbolicScalar(alpha=-c),
                   SymbolicScalar(gamma=S3 * I * c), SymbolicScalar(gamma=-I * c)]


def test_first_column_real_parts(period_matrix):
    col = period_matrix.symbolic_numeric()[:, 0]
    assert np.allclose(col.real, [1.5 * ALPHA, -1.5 * ALPHA, -1.5 * GAMMA, 0.5 * math.sqrt(3) * GAMMA],
                       atol=1e-12)


def test_all_eighty_entries_agree(period_matrix):
    assert period_matrix.numeric.shape == (4, 20)
    assert period_matrix.cycle_labels == COLUMN_LABELS
    assert period_matrix.max_discrepancy() < 1e-8
    assert period_matrix.matches_reference()
    assert np.all(period_matrix.errors < 1e-10)


def test_every_period_vector_nonzero(period_matrix):
    assert np.all(np.linalg.norm(period_matrix.numeric, axis=0) > 0.1)


def test_substituting_gamma_by_beta(period_matrix):
    # evaluate with gamma := beta / sqrt(3); agreement must persist
    k = LatticeConstants(ALPHA, BETA, BETA / math.sqrt(3))
    assert period_matrix.max_discrepancy(k) < 1e-8


def test_wrong_constants_raise_mismatch():
    with pytest.raises(MismatchError):
        assemble_period_matrix(constants=LatticeConstants(ALPHA * 1.01, BETA, GAMMA))
