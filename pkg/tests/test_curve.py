"""The curve w^3 = z^12 - 1, its sheets, Psi and the genus obstruction."""
import cmath
import math

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from trigsurf.curve import (GENUS10, N, Admissible, CurveParams, Obstructed, SurfacePoint,
                            branch_orders, check_no_common_zeros, conformality_polynomial,
                            conformality_residual, continue_sheet, psi, sheet_values,
                            trigonal_obstruction)
from trigsurf.errors import (AmbiguousContinuation, BranchPointSingularity, DomainError,
                             SeedOffCurve)

CBRT2 = 2 ** (1 / 3)
z_sym = sympy.Symbol("z")


def off_branch(z):
    return abs(z**N - 1) > 1e-3


# --- parameters and sheets ---------------------------------------------------

def test_curve_params():
    assert GENUS10.branch_degree == 12 and GENUS10.r == 3
    assert len(GENUS10.holomorphic_basis()) == 10
    assert CurveParams(4).branch_degree == 6
    for g in (0, 5, 6):
        with pytest.raises(DomainError):
            CurveParams(g)


def test_sheet_values_at_origin():
    expected = sorted([-1, cmath.exp(1j * math.pi / 3), cmath.exp(-1j * math.pi / 3)], key=cmath.phase)
    assert np.allclose(sheet_values(0), expected, atol=1e-15)


def test_sheet_values_contains_minus_cbrt2():
    vals = sheet_values(cmath.exp(1j * math.pi / 12))
    assert min(abs(v + CBRT2) for v in vals) < 1e-14


def test_sheet_values_at_branch_point():
    assert sheet_values(1) == [0j, 0j, 0j]


@given(st.floats(0.0, 3.0), st.floats(0.0, 2 * math.pi))
def test_sheets_distinct_and_on_curve(r, t):
    z = r * cmath.exp(1j * t)
    if not off_branch(z):
        return
    vals = sheet_values(z)
    assert all(SurfacePoint(z, w).on_curve() for w in vals)
    assert min(abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1:]) > 0
    assert [cmath.phase(v) for v in vals] == sorted(cmath.phase(v) for v in vals)


# --- Psi -------------------------------------------------------------------

def test_psi_at_origin():
    assert np.allclose(psi(SurfacePoint(0, -1)), [1, 1j, 0, 0], atol=1e-15)


def test_psi_branch_point_raises():
    with pytest.raises(BranchPointSingularity):
        psi(SurfacePoint(1, 0))


@pytest.mark.parametrize("z", [cmath.exp(1j * math.pi / 12), 2.0])
def test_psi_conformal_examples(z):
    for w in sheet_values(z):
        v = psi(SurfacePoint(z, w))
        assert np.all(np.isfinite(v))
        assert conformality_residual(v) < 1e-12


def test_conformality_random_points():
    rng = np.random.default_rng(7)
    count = 0
    while count < 1000:
        z = rng.uniform(0, 2.5) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        if not off_branch(z):
            continue
        w = sheet_values(z)[rng.integers(3)]
        assert conformality_residual(psi(SurfacePoint(z, w))) < 1e-12
        count += 1


def test_conformality_polynomial_vanishes():
    assert conformality_polynomial() == 0


# --- no common zeros -------------------------------------------------------

def test_no_common_zeros_for_the_surface():
    assert check_no_common_zeros()


def test_common_zeros_detected():
    assert not check_no_common_zeros([z_sym**6 - 1, sympy.I * (z_sym**6 - 1), 0, 0])


def test_partial_family_without_common_zeros():
    assert check_no_common_zeros([1 - z_sym**6, sympy.I * (1 + z_sym**6), 0, 0])


def test_all_zero_family():
    assert not check_no_common_zeros([0, 0, 0, 0])


def test_branch_orders_are_zero():
    # the numerators do not vanish at 12th roots of unity except where another one is nonzero
    orders = branch_orders()
    assert len(orders) == 12
    assert all(min(row) == 0 for row in orders)


# --- obstruction -----------------------------------------------------------

@pytest.mark.parametrize("g,expected", [
    (10, Admissible(3)), (4, Admissible(1)),
    (6, Obstructed("6 ≡ 0 mod 3")), (8, Obstructed("8 ≡ 2 mod 3")),
    (0, Obstructed("not trigonal")), (1, Obstructed("not trigonal")), (3, Obstructed("not trigonal")),
])
def test_obstruction_examples(g, expected):
    assert trigonal_obstruction(g) == expected


def test_obstruction_table():
    admissible = {3 * r + 1 for r in range(1, 101)}
    for g in range(0, 302):
        result = trigonal_obstruction(g)
        if g in admissible:
            assert result == Admissible((g - 1) // 3)
        else:
            assert isinstance(result, Obstructed)


@pytest.mark.parametrize("g", [-1, 2.5, True, "10"])
def test_obstruction_rejects_bad_input(g):
    with pytest.raises(DomainError):
        trigonal_obstruction(g)


def test_obstruction_strings():
    assert str(trigonal_obstruction(10)) == "Admissible(3)"
    assert str(trigonal_obstruction(2)) == "Obstructed(not trigonal)"


# --- continuation ----------------------------------------------------------

def test_constant_path():
    z0 = cmath.exp(1j * math.pi / 12)
    track = continue_sheet(lambda t: np.full_like(t, z0, dtype=complex), 0.0, -CBRT2, 0.0, 1.0)
    assert np.allclose(track(np.linspace(0, 1, 11)), -CBRT2, atol=1e-14)


def _nearest_root_oracle(t0, t1, w0):
    """Nearest-root marching along exp(i t), halving the step until stable."""
    prev, steps = None, 8
    while True:
        w = complex(w0)
        for t in np.linspace(t0, t1, steps + 1)[1:]:
            w = min(sheet_values(cmath.exp(1j * t)), key=lambda r: abs(r - w))
        if prev is not None and abs(w - prev) < 1e-12:
            return w
        prev, steps = w, steps * 2


def test_arc_continuation_matches_step_halving_oracle():
    arc = lambda t: np.exp(1j * np.asarray(t))  # noqa: E731
    track = continue_sheet(arc, math.pi / 12, -CBRT2, math.pi / 12, math.pi / 6,
                           branch_ends=(False, True))
    t = math.pi / 8
    value = complex(track(t)[0])
    assert abs(value - _nearest_root_oracle(math.pi / 12, t, -CBRT2)) < 1e-12
    assert SurfacePoint(cmath.exp(1j * t), value).on_curve()
    # the table stops just short of the branch point at pi/6
    assert abs(track.ts[-1] - (math.pi / 6 - 1e-8)) < 1e-15


def test_arc_through_branch_point_is_ambiguous():
    arc = lambda t: np.exp(1j * np.asarray(t))  # noqa: E731
    with pytest.raises(AmbiguousContinuation):
        continue_sheet(arc, math.pi / 12, -CBRT2, math.pi / 12, math.pi / 4)


def test_refinement_stability():
    arc = lambda t: 1.2 * np.exp(1j * np.asarray(t))  # noqa: E731
    w0 = sheet_values(1.2 * cmath.exp(0.1j))[0]
    track = continue_sheet(arc, 0.1, w0, 0.1, 2.0)
    end = complex(track.ws[-1])
    assert abs(end - _nearest_root_oracle_radius(0.1, 2.0, w0, 1.2)) < 1e-12


def _nearest_root_oracle_radius(t0, t1, w0, radius):
    prev, steps = None, 16
    while True:
        w = complex(w0)
        for t in np.linspace(t0, t1, steps + 1)[1:]:
            w = min(sheet_values(radius * cmath.exp(1j * t)), key=lambda r: abs(r - w))
        if prev is not None and abs(w - prev) < 1e-12:
            return w
        prev, steps = w, steps * 2


def _loop_around_one(w0, turns=1):
    loop = lambda t: 1 + 1e-2 * np.exp(1j * np.asarray(t))  # noqa: E731
    track = continue_sheet(loop, 0.0, w0, 0.0, 2 * math.pi * turns)
    return complex(track.ws[-1])


def test_monodromy_around_branch_point():
    w0 = sheet_values(1.01)[0]
    w1 = _loop_around_one(w0)
    assert abs(w1 - w0 * cmath.exp(2j * math.pi / 3)) < 1e-12 * abs(w0) * 10
    assert abs(_loop_around_one(w0, turns=3) - w0) < 1e-11


def test_seed_off_curve():
    with pytest.raises(SeedOffCurve):
        continue_sheet(lambda t: np.exp(1j * t), 0.0, 1.0 + 0j, 0.0, 1.0)


def test_ambiguous_continuation_through_branch_point():
    # the straight path through z = 1 meets a triple root
    line = lambda t: np.asarray(t) + 0j  # noqa: E731
    with pytest.raises(AmbiguousContinuation):
        continue_sheet(line, 0.5, sheet_values(0.5)[0], 0.5, 1.5, min_step=1e-6)
