"""Tests for the numeric quantization-condition layer.

The solver is checked against an independent oracle: for the symmetric
ground-state quantum numbers the root vector is symmetric around zero, so
the coupled system collapses to a scalar equation in the largest root,
which we solve by bracketing (scipy brentq) straight from the defining
logarithmic conditions.
"""

import cmath
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from qnls import bethe, ops, pwfun
from qnls.exact import GaussianRational
from qnls.errors import DegenerateSpectrumError, UnsupportedRegimeError


# -- closed-form coefficient ----------------------------------------------------------


def test_gamma_factor_pair_goldens():
    # (d - i*gamma)/d with d = 2 - 1 = 1 and gamma = 1: exactly 1 - i.
    assert bethe.gamma_factor((2, 1), 1) == GaussianRational(1, -1)
    # Reversed order flips the sign of d: (-1 - i)/(-1) = 1 + i.
    assert bethe.gamma_factor((1, 2), 1) == GaussianRational(1, 1)
    assert bethe.gamma_factor((Fraction(3), 1), 2) == GaussianRational(1, -1)


def test_gamma_factor_degenerate_raises():
    with pytest.raises(DegenerateSpectrumError):
        bethe.gamma_factor((1, 1), 1)
    with pytest.raises(DegenerateSpectrumError):
        bethe.lieb_liniger_psi((2, 2), 1)


def test_closed_form_two_particle_point_values():
    # Hand-assembled group average at lambda = (3, 1), gamma = 2:
    # on x1 > x2 the value is ((1-i) e^{i(3 x1 + x2)} + (1+i) e^{i(x1 + 3 x2)}) / 2.
    f = bethe.lieb_liniger_psi((3, 1), 2)
    for x1, x2 in [(1.0, 0.5), (0.25, -0.75), (2.0, -1.0)]:
        expected = (
            (1 - 1j) * cmath.exp(1j * (3 * x1 + x2))
            + (1 + 1j) * cmath.exp(1j * (x1 + 3 * x2))
        ) / 2
        got = pwfun.evaluate(f, (x1, x2))
        assert abs(got - expected) < 1e-12
        # Symmetric extension: swapping the point leaves the value unchanged.
        swapped = pwfun.evaluate(f, (x2, x1))
        assert abs(swapped - expected) < 1e-12


# -- quantum numbers and validation ---------------------------------------------------


def test_default_quantum_numbers_ladder():
    assert bethe.default_quantum_numbers(1) == (Fraction(0),)
    assert bethe.default_quantum_numbers(2) == (Fraction(-1, 2), Fraction(1, 2))
    assert bethe.default_quantum_numbers(3) == (-1, 0, 1)
    assert bethe.default_quantum_numbers(4) == (
        Fraction(-3, 2),
        Fraction(-1, 2),
        Fraction(1, 2),
        Fraction(3, 2),
    )


def test_solver_rejects_bad_inputs():
    with pytest.raises(UnsupportedRegimeError):
        bethe.solve_bae(2, 0.0, 1.0)
    with pytest.raises(UnsupportedRegimeError):
        bethe.solve_bae(2, -1.0, 1.0)
    with pytest.raises(ValueError):
        bethe.solve_bae(2, 1.0, 0.0)
    with pytest.raises(ValueError):
        bethe.solve_bae(2, 1.0, 1.0, quantum_numbers=(0,))
    with pytest.raises(ValueError):
        bethe.solve_bae(2, 1.0, 1.0, quantum_numbers=(Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(ValueError):
        # Even particle number needs half-odd quantum numbers.
        bethe.solve_bae(2, 1.0, 1.0, quantum_numbers=(0, 1))
    with pytest.raises(ValueError):
        # Odd particle number needs integer quantum numbers.
        bethe.solve_bae(3, 1.0, 1.0, quantum_numbers=(Fraction(-1, 2), 0, 1))
    with pytest.raises(ValueError):
        bethe.solve_bae(2, 1.0, 1.0, quantum_numbers=(0, Fraction(1, 3)))


def test_root_container_requires_increasing_vector():
    with pytest.raises(ValueError):
        bethe.BetheRoots((1.0, 1.0), (Fraction(-1, 2), Fraction(1, 2)), 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        bethe.BetheRoots((2.0, 1.0), (Fraction(-1, 2), Fraction(1, 2)), 1.0, 1.0, 0.0)


# -- solver against the scalar bracketing oracle --------------------------------------


def test_two_particle_ground_state_matches_bisection_oracle():
    # Symmetric ansatz (-v, v): the j = 2 condition reads
    #   v L + 2 arctan(2 v / gamma) = pi.
    for gamma, length in [(0.1, 5.0), (1.3, 5.0), (10.0, 2 * math.pi)]:
        oracle = brentq(
            lambda v: v * length + 2 * math.atan(2 * v / gamma) - math.pi,
            1e-12,
            math.pi / length,
            xtol=1e-14,
        )
        roots = bethe.solve_bae(2, gamma, length)
        assert abs(roots.lambdas[1] - oracle) < 1e-9
        assert abs(roots.lambdas[0] + oracle) < 1e-9


def test_three_particle_ground_state_matches_bisection_oracle():
    # Symmetric ansatz (-v, 0, v): the j = 3 condition reads
    #   v L + 2 arctan(v / gamma) + 2 arctan(2 v / gamma) = 2 pi.
    gamma, length = 2.0, 4.0
    oracle = brentq(
        lambda v: v * length
        + 2 * math.atan(v / gamma)
        + 2 * math.atan(2 * v / gamma)
        - 2 * math.pi,
        1e-12,
        2 * math.pi / length,
        xtol=1e-14,
    )
    roots = bethe.solve_bae(3, gamma, length)
    assert abs(roots.lambdas[2] - oracle) < 1e-9
    assert abs(roots.lambdas[1]) < 1e-9
    assert abs(roots.lambdas[0] + oracle) < 1e-9


@settings(deadline=None, max_examples=8)
@given(st.integers(min_value=-3, max_value=3), st.sampled_from([2, 3]))
def test_quantum_number_shift_translates_roots(c, n):
    # Adding the same integer to every quantum number shifts each root by
    # 2 pi c / L: the interaction terms depend only on root differences.
    gamma, length = 1.5, 6.0
    base = bethe.solve_bae(n, gamma, length)
    shifted_qn = tuple(q + c for q in bethe.default_quantum_numbers(n))
    shifted = bethe.solve_bae(n, gamma, length, quantum_numbers=shifted_qn)
    delta = 2 * math.pi * c / length
    for a, b in zip(base.lambdas, shifted.lambdas):
        assert abs(b - (a + delta)) < 1e-9


def test_solver_residual_below_gate():
    for n in (1, 2, 3, 4):
        for gamma in (0.1, 1.0, 10.0):
            roots = bethe.solve_bae(n, gamma, 2 * math.pi)
            assert roots.residual < 1e-10
            assert bethe.product_residual(roots.lambdas, gamma, 2 * math.pi) < 1e-10
            assert all(
                roots.lambdas[t] < roots.lambdas[t + 1] for t in range(n - 1)
            )


# -- serialization --------------------------------------------------------------------


def test_roots_json_round_trip_is_exact():
    roots = bethe.solve_bae(3, 0.7, 5.0)
    data = json.loads(json.dumps(roots.to_json()))
    back = bethe.BetheRoots.from_json(data)
    assert back.lambdas == roots.lambdas
    assert back.quantum_numbers == roots.quantum_numbers
    assert back.gamma == roots.gamma
    assert back.L == roots.L
    assert back.residual == roots.residual


def test_roots_csv_shape():
    roots = bethe.solve_bae(2, 1.0, 5.0)
    lines = roots.to_csv().splitlines()
    assert lines[0] == "index,quantum_number,lambda"
    assert len(lines) == 3
    assert lines[1].startswith("1,-1/2,")
    # repr round trip keeps the float bit pattern.
    assert float(lines[2].split(",")[2]) == roots.lambdas[1]


# -- float engine against the exact engine --------------------------------------------


def test_numeric_psi_matches_exact_construction():
    lam = (Fraction(3, 2), Fraction(-1, 3))
    gamma = Fraction(2, 5)
    exact_f = ops.psi(lam, gamma)
    numeric_f = bethe.numeric_psi([float(v) for v in lam], float(gamma))
    for x in [(0.9, 0.1), (-0.4, -1.3), (2.2, 0.7), (0.05, -0.6)]:
        a = pwfun.evaluate(exact_f, x)
        b = numeric_f.evaluate(x)
        assert abs(a - b) < 1e-10
        assert abs(
            pwfun.evaluate(pwfun.differentiate(1, exact_f), x)
            - numeric_f.derivative_evaluate(1, x)
        ) < 1e-10


def test_numeric_psi_matches_exact_construction_three_particles():
    lam = (2, Fraction(1, 2), -1)
    gamma = Fraction(3, 7)
    exact_f = ops.psi(lam, gamma)
    numeric_f = bethe.numeric_psi([float(v) for v in lam], float(gamma))
    for x in [(1.3, 0.4, -0.2), (-0.1, -0.5, -2.0), (0.33, 0.21, 0.07)]:
        assert abs(pwfun.evaluate(exact_f, x) - numeric_f.evaluate(x)) < 1e-10


def test_numeric_closed_form_matches_exact_closed_form():
    lam = (2, Fraction(1, 2), -1)
    gamma = Fraction(3, 7)
    exact_f = bethe.lieb_liniger_psi(lam, gamma)
    numeric_f = bethe.numeric_lieb_liniger_psi([float(v) for v in lam], float(gamma))
    for x in [(1.3, 0.4, -0.2), (0.0, -0.5, -2.0), (0.33, 0.21, 0.07)]:
        assert abs(pwfun.evaluate(exact_f, x) - numeric_f.evaluate(x)) < 1e-12


# -- periodicity diagnostic -----------------------------------------------------------


def test_periodicity_residual_validates_arguments():
    f = bethe.numeric_lieb_liniger_psi((1.0, -1.0), 1.0)
    with pytest.raises(ValueError):
        bethe.periodicity_residual(f, 3, 0.0, 1.0)
    with pytest.raises(ValueError):
        bethe.periodicity_residual(f, 1, 1.0, 0.0)


def test_periodicity_residual_small_only_at_quantized_roots():
    gamma, length = 1.0, 2 * math.pi
    roots = bethe.solve_bae(2, gamma, length)
    sym = bethe.numeric_lieb_liniger_psi(roots.lambdas, gamma)
    for j in (1, 2):
        assert bethe.periodicity_residual(sym, j, 0.0, length) < 1e-8
    # Detuned roots break periodicity by an order-one amount.
    detuned = bethe.numeric_lieb_liniger_psi(
        [v + 0.05 for v in roots.lambdas], gamma
    )
    assert bethe.periodicity_residual(detuned, 1, 0.0, length) > 1e-3
    # The non-symmetric wavefunction is not box periodic even at the roots.
    nonsym = bethe.numeric_psi(roots.lambdas, gamma)
    assert bethe.periodicity_residual(nonsym, 1, 0.0, length) > 1e-3


def test_periodicity_residual_deterministic_per_seed():
    f = bethe.numeric_lieb_liniger_psi((1.0, -1.0), 1.0)
    a = bethe.periodicity_residual(f, 1, 0.0, 1.0, sample_count=50, seed=3)
    b = bethe.periodicity_residual(f, 1, 0.0, 1.0, sample_count=50, seed=3)
    c = bethe.periodicity_residual(f, 1, 0.0, 1.0, sample_count=50, seed=4)
    assert a == b
    assert a != c
