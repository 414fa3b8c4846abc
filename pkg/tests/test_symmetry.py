"""Pullback identities and the dihedral symmetry group."""
import numpy as np
import pytest

from trigsurf.curve import SurfacePoint
from trigsurf.cycles import PHI, PHI1, PHI2, J
from trigsurf.errors import DomainError, NonClosure, SampleOnSingularLocus
from trigsurf.exact import ONE
from trigsurf.symmetry import (EXPECTED_PULLBACKS, PHI1_PULLBACK, PHI2_PULLBACK, PHI_PULLBACK,
                               PullbackMatrix, dihedral_relations, diagonal, gauss_map_j_invariant,
                               generated_group, is_orthogonal, matrix_power, sample_points,
                               verify_pullback)


@pytest.mark.parametrize("name", sorted(EXPECTED_PULLBACKS))
def test_pullbacks(name):
    a, expected = EXPECTED_PULLBACKS[name]
    assert verify_pullback(a, expected, sample_count=100) < 1e-12


def test_wrong_scalar_fails():
    wrong = PullbackMatrix(ONE, PHI_PULLBACK.rows())
    assert verify_pullback(PHI, wrong, sample_count=10) > 0.1


def test_wrong_block_fails():
    assert verify_pullback(PHI2, PullbackMatrix(ONE, diagonal(1, 1, -1, -1)), sample_count=10) > 0.1


def test_singular_samples_rejected():
    with pytest.raises(SampleOnSingularLocus):
        verify_pullback(PHI2, PHI2_PULLBACK, points=[SurfacePoint(0, -1)])
    with pytest.raises(SampleOnSingularLocus):
        verify_pullback(PHI1, PHI1_PULLBACK, points=[SurfacePoint(1, 0)])


def test_non_orthogonal_block_rejected():
    with pytest.raises(DomainError):
        PullbackMatrix(ONE, diagonal(2, 1, 1, 1))


def test_blocks_exactly_orthogonal():
    for pb in (PHI_PULLBACK, PHI1_PULLBACK, PHI2_PULLBACK):
        assert is_orthogonal(pb.rows())


def test_sample_points_deterministic():
    a, b = sample_points(5, seed=4), sample_points(5, seed=4)
    assert a == b and all(p.on_curve() for p in a)


def test_trivial_group():
    assert generated_group([diagonal(1, 1, 1, 1)]).order == 1


def test_rotation_group_order_12():
    info = generated_group([PHI1_PULLBACK.rows()])
    assert info.order == 12
    assert info.generator_reducible == (True,)


def test_dihedral_group_order_24():
    info = generated_group([PHI1_PULLBACK.rows(), PHI2_PULLBACK.rows()])
    assert info.order == 24
    assert info.generator_reducible == (True, True)
    assert info.all_block_diagonal


def test_non_closure_bound():
    with pytest.raises(NonClosure):
        generated_group([PHI1_PULLBACK.rows()], bound=5)


def test_dihedral_relations():
    rel = dihedral_relations()
    assert rel.rotation_order_12 and rel.reflection_involution and rel.conjugation
    assert rel.all()
    b1 = PHI1_PULLBACK.rows()
    assert matrix_power(b1, 12) == diagonal(1, 1, 1, 1)
    assert matrix_power(b1, 6) != diagonal(1, 1, 1, 1)


def test_gauss_map_j_invariance():
    pts = sample_points(20, seed=1)
    assert gauss_map_j_invariant(pts)
    assert all(J(p).z == p.z for p in pts)


def test_numeric_block():
    m = PHI_PULLBACK.numeric()
    assert m.shape == (4, 4)
    assert np.allclose(m @ m.conj().T, np.eye(4), atol=1e-15)
