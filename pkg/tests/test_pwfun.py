"""Piecewise-function container and calculus, with quadrature oracles."""

import cmath
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import nquad, quad

from qnls import weyl
from qnls.errors import AmbiguousPiecewiseIntegralError, OnWallError
from qnls.exact import GR_I, GR_ONE, GaussianRational, PhasedScalar
from qnls.pwfun import (
    PWFunction,
    Term,
    act_permutation,
    constant,
    differentiate,
    evaluate,
    evaluate_exact,
    from_global_terms,
    inner_product,
    integrate_direction,
    jump_residual,
    lift,
    plane_wave,
    restrict_boundary,
    step_multiply,
    wall_restriction,
    zero,
)

fracs = st.fractions(min_value=-4, max_value=4, max_denominator=6)
small_waves = st.tuples(fracs, fracs)


def _pw(dim, seed):
    """Deterministic genuinely piecewise function of the given dimension."""
    import random

    rng = random.Random(seed)
    pieces = {}
    for alcove in weyl.all_permutations(dim):
        terms = []
        for _ in range(rng.randint(1, 2)):
            coeff = GaussianRational(
                Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
                Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
            )
            monomial = tuple(rng.randint(0, 1) for _ in range(dim))
            wave = tuple(
                Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(dim)
            )
            terms.append(Term.make(coeff, monomial, wave))
        pieces[alcove] = terms
    return PWFunction(dim, pieces)


# -- container algebra ---------------------------------------------------------------


def test_canonical_merge_and_equality():
    t1 = Term.make(1, (0,), (Fraction(1, 2),))
    t2 = Term.make(GR_I, (1,), (2,))
    f = PWFunction(1, {(1,): [t1, t2]})
    g = PWFunction(1, {(1,): [t2, t1]})
    assert f == g
    assert (f - g).is_zero()
    assert f.to_json() == g.to_json()
    doubled = PWFunction(1, {(1,): [t1, t1]})
    assert doubled == f.scale(2) - PWFunction(1, {(1,): [t2, t2]})


@given(small_waves, small_waves, fracs)
def test_linearity(w1, w2, c):
    f, g = plane_wave(w1), plane_wave(w2)
    scaled = (f + g).scale(c)
    assert scaled == f.scale(c) + g.scale(c)
    assert (f - f).is_zero()
    assert PWFunction.sum(2, [f, g, f]) == f + g + f


def test_sum_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        PWFunction.sum(2, [plane_wave((1, 2)), plane_wave((1,))])


def test_json_round_trip_is_canonical():
    f = _pw(2, seed=5) + plane_wave((Fraction(1, 3), 2)).scale(GR_I)
    data = f.to_json()
    again = PWFunction.from_json(data)
    assert again == f
    assert json.dumps(again.to_json()) == json.dumps(data)


@given(st.permutations((1, 2, 3)).map(tuple))
def test_act_permutation_is_group_action(w):
    f = _pw(3, seed=9)
    u = weyl.inverse(w)
    assert act_permutation(u, act_permutation(w, f)) == f
    x = (Fraction(3), Fraction(1), Fraction(-2))
    lhs = evaluate_exact(act_permutation(w, f), x)
    rhs = evaluate_exact(f, weyl.act_point(u, x))
    assert (lhs - rhs).is_zero()


def test_step_multiply():
    f = constant(2, 1)
    stepped = step_multiply((2, 1), f)
    assert stepped == step_multiply((2, 1), stepped)  # idempotent
    assert evaluate(stepped, (0, 1)) == 1
    assert stepped.pieces.get((1, 2)) in (None, ())
    with pytest.raises(ValueError):
        step_multiply((1, 1), f)
    with pytest.raises(ValueError):
        step_multiply((0, 1), f)


def test_differentiate_plane_wave_and_monomial():
    wave = plane_wave((Fraction(3, 2), -1))
    assert differentiate(1, wave) == wave.scale(GR_I * Fraction(3, 2))
    poly = from_global_terms(1, [Term.make(1, (2,), (0,))])
    dpoly = differentiate(1, poly)
    assert dpoly == from_global_terms(1, [Term.make(2, (1,), (0,))])


# -- directional integration against adaptive quadrature -----------------------------


def _eval_wall_safe(f, point):
    """Float value at a point, nudging off walls (the functions under test
    extend continuously, so an O(1e-12) shift is invisible at oracle tolerance)."""
    try:
        return evaluate(f, point)
    except OnWallError:
        nudged = [v - j * 1e-12 for j, v in enumerate(point, start=1)]
        return evaluate(f, nudged)


def _segment_breakpoints(x, j, k):
    """Candidate discontinuity parameters of y ↦ f(x - y(e_j - e_k))."""
    breaks = set()
    coords = {m: Fraction(v) for m, v in enumerate(x, start=1)}
    a, b = coords[j], coords[k]
    for m, v in coords.items():
        if m not in (j, k):
            breaks.add(a - v)  # slot j passes x_m
            breaks.add(v - b)  # slot k passes x_m
    breaks.add((a - b) / 2)  # slots j and k cross
    lo, hi = sorted((Fraction(0), a - b))
    return sorted(float(t) for t in breaks if lo < t < hi)


def _quad_directional(f, j, k, x):
    a, b = float(x[j - 1]), float(x[k - 1])

    def integrand(y, part):
        point = [float(v) for v in x]
        point[j - 1] = a - y
        point[k - 1] = b + y
        value = _eval_wall_safe(f, point)
        return value.real if part == 0 else value.imag

    pts = _segment_breakpoints(x, j, k)
    lo, hi, sign = 0.0, a - b, 1.0
    if hi < lo:
        lo, hi, sign = hi, lo, -1.0
    re = quad(integrand, lo, hi, args=(0,), points=pts, limit=200, epsabs=1e-12)[0]
    im = quad(integrand, lo, hi, args=(1,), points=pts, limit=200, epsabs=1e-12)[0]
    return sign * complex(re, im)


def _quad_cases():
    from qnls import ops

    smooth3 = from_global_terms(
        3,
        [
            Term.make(GR_I, (1, 0, 0), (Fraction(1, 2), -1, 2)),
            Term.make(Fraction(2, 3), (0, 0, 1), (0, 1, Fraction(-3, 2))),
        ],
    )
    chain3 = ops.elementary_create(
        -1,
        Fraction(2, 3),
        (),
        from_global_terms(2, [Term.make(1, (0, 0), (Fraction(1), Fraction(-1, 2)))]),
    )
    return [
        (_pw(2, seed=1), 1, 2, [(2, Fraction(1, 2)), (Fraction(-1, 3), 3)]),
        (_pw(2, seed=2), 2, 1, [(2, Fraction(1, 2)), (Fraction(-1, 3), 3)]),
        (smooth3, 1, 3, [(2, Fraction(1, 2), -1), (Fraction(-1, 3), 3, 1)]),
        (chain3, 3, 1, [(2, Fraction(1, 2), -1), (1, 3, 2)]),
        (chain3, 3, 2, [(2, Fraction(1, 2), -1), (1, 3, 2)]),
    ]


@pytest.mark.parametrize("case", range(5))
def test_integrate_direction_matches_quadrature(case):
    f, j, k, points = _quad_cases()[case]
    result = integrate_direction(j, k, f)
    for x in points:
        got = evaluate_exact(result, tuple(Fraction(v) for v in x)).to_complex()
        want = _quad_directional(f, j, k, x)
        assert cmath.isclose(got, want, rel_tol=1e-7, abs_tol=1e-7)


def test_integrate_direction_leibniz_identity():
    # (d_j - d_k) I_{jk} f = f + (transposed f): boundary motion of both
    # endpoint substitutions plus the fundamental theorem along the path.
    wave = plane_wave((Fraction(2), Fraction(-1)))
    integral = integrate_direction(1, 2, wave)
    back = differentiate(1, integral) - differentiate(2, integral)
    assert back == wave + act_permutation((2, 1), wave)
    piecewise = _pw(2, seed=7)
    integral = integrate_direction(2, 1, piecewise)
    back = differentiate(2, integral) - differentiate(1, integral)
    assert back == piecewise + act_permutation((2, 1), piecewise)


def test_ambiguous_piecewise_integral_raises():
    # A discontinuity at a crossing whose position depends on x1 + x3 is not
    # representable on whole alcoves of three coordinates.
    f = PWFunction(
        3,
        {
            alcove: [Term.make(1 if alcove[0] < alcove[2] else 2, (0, 0, 0), (0, 0, 0))]
            for alcove in weyl.all_permutations(3)
        },
    )
    with pytest.raises(AmbiguousPiecewiseIntegralError):
        integrate_direction(1, 3, f)


# -- boundary restriction, lift, walls ------------------------------------------------


def test_restrict_boundary_against_evaluation():
    f = _pw(2, seed=11)
    xp, xm = Fraction(-1, 2), Fraction(3, 2)
    low = restrict_boundary(+1, f, xp, xm)
    high = restrict_boundary(-1, f, xp, xm)
    for t in (Fraction(0), Fraction(1), Fraction(5, 4)):
        # inside the box the endpoint slot is strictly extremal, so the
        # one-sided piece is the alcove that ranks the fixed slot extremal;
        # sign +1 fixes slot 1 at the floor, sign -1 the last slot at the top
        alc_low = weyl.alcove_of((float(xp) - 1e-9, float(t)))
        want_low = evaluate_exact(
            PWFunction(2, {alc_low: f.pieces.get(alc_low, ())}), (xp, t)
        )
        assert (evaluate_exact(low, (t,)) - want_low).is_zero()
        alc_high = weyl.alcove_of((float(t), float(xm) + 1e-9))
        want_high = evaluate_exact(
            PWFunction(2, {alc_high: f.pieces.get(alc_high, ())}), (t, xm)
        )
        assert (evaluate_exact(high, (t,)) - want_high).is_zero()
    with pytest.raises(ValueError):
        restrict_boundary(+1, f, xm, xp)


def test_lift_then_restrict_is_identity():
    f = _pw(2, seed=4)
    xp, xm = Fraction(0), Fraction(1)
    for sign in (+1, -1):
        lifted = lift(sign, f)
        assert lifted.dimension == 3
        assert (restrict_boundary(sign, lifted, xp, xm) - f).is_zero()
        x = (Fraction(1, 3), Fraction(7, 8))
        full = (Fraction(-5),) + x if sign > 0 else x + (Fraction(5),)
        assert (evaluate_exact(lifted, full) - evaluate_exact(f, x)).is_zero()


def test_wall_restriction_sides():
    f = _pw(2, seed=8)
    plus = wall_restriction(f, 1, 2, +1)
    minus = wall_restriction(f, 1, 2, -1)
    t = Fraction(2, 3)
    eps = 1e-7
    got_plus = evaluate_exact(plus, (t,)).to_complex()
    want_plus = evaluate(f, (float(t) + eps, float(t)))
    assert cmath.isclose(got_plus, want_plus, rel_tol=1e-5, abs_tol=1e-5)
    got_minus = evaluate_exact(minus, (t,)).to_complex()
    want_minus = evaluate(f, (float(t) - eps, float(t)))
    assert cmath.isclose(got_minus, want_minus, rel_tol=1e-5, abs_tol=1e-5)


def test_jump_residual_zero_iff_condition_holds():
    # e^{i(ax1+bx2)} symmetrized-with-jump: build g with the exact derivative
    # jump 2*gamma*g on the wall and check the residual vanishes.
    gamma = Fraction(1, 2)
    lam = (Fraction(2), Fraction(-1))
    from qnls import ops

    psi = ops.psi(lam, gamma, "b_minus")
    assert jump_residual(psi, 1, 2, gamma).is_zero()
    assert not jump_residual(psi, 1, 2, gamma + 1).is_zero()


# -- evaluation and inner product ------------------------------------------------------


def test_evaluate_exact_matches_float():
    f = _pw(2, seed=3)
    x = (Fraction(7, 5), Fraction(-2, 3))
    exact = evaluate_exact(f, x).to_complex()
    approx = evaluate(f, tuple(float(v) for v in x))
    assert cmath.isclose(exact, approx, rel_tol=1e-12, abs_tol=1e-12)


def test_evaluate_dimension_checks():
    f = plane_wave((1, 2))
    with pytest.raises(ValueError):
        evaluate_exact(f, (Fraction(1),))


def test_inner_product_against_nquad():
    from qnls import ops

    gamma = Fraction(1, 3)
    f = ops.psi((Fraction(1), Fraction(-2)), gamma, "b_minus")
    g = ops.psi((Fraction(2), Fraction(1, 2)), gamma, "b_plus")
    xp, xm = Fraction(-1, 2), Fraction(1)
    exact = inner_product(f, g, xp, xm).to_complex()

    def integrand(x2, x1, part):
        value = _eval_wall_safe(f, (x1, x2)) * _eval_wall_safe(g, (x1, x2)).conjugate()
        return value.real if part == 0 else value.imag

    box = [(float(xp), float(xm)), (float(xp), float(xm))]
    re = nquad(integrand, box, args=(0,), opts={"epsabs": 1e-11, "limit": 120})[0]
    im = nquad(integrand, box, args=(1,), opts={"epsabs": 1e-11, "limit": 120})[0]
    assert cmath.isclose(exact, complex(re, im), rel_tol=1e-8, abs_tol=1e-8)


def test_inner_product_axioms():
    f = plane_wave((Fraction(1),))
    g = plane_wave((Fraction(2),))
    xp, xm = Fraction(0), Fraction(1)
    ip_fg = inner_product(f, g, xp, xm)
    ip_gf = inner_product(g, f, xp, xm)
    assert ip_fg.conjugate() == ip_gf
    norm = inner_product(f, f, xp, xm)
    assert norm == PhasedScalar.from_scalar(GR_ONE)  # unit wave over unit box
    assert inner_product(f + g, f, xp, xm) == inner_product(
        f, f, xp, xm
    ) + inner_product(g, f, xp, xm)


def test_zero_and_constant():
    assert zero(2).is_zero()
    one = constant(0, 1)
    assert evaluate_exact(one, ()) == PhasedScalar.from_scalar(GR_ONE)
