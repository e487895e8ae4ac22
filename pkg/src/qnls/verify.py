"""Randomized exact verification suites for the operator calculus.

Each suite draws random Gaussian-rational parameters, evaluates both sides
of a family of operator identities in exact arithmetic, and reports one
check per identity instance.  A check passes only when the two sides are
identical elements of the exact domain (canonical piecewise functions or
phased scalars); there are no tolerances.  Every suite carries at least one
negative control -- a deliberately perturbed identity that must fail -- so
a healthy run reports every check as ``exact-pass`` and a vacuous-pass bug
surfaces immediately.

Reports are deterministic: the same (suite, dimension, seed, points)
produces the same JSON bit for bit.  Checks are independent and may be
evaluated concurrently; set the environment variable ``HECKE_QNLS_THREADS``
to an integer >= 1 to size the worker pool (default 1).
"""

from __future__ import annotations

import itertools
import json
import os
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import bethe, ops, pwfun, weyl
from .errors import DegenerateSpectrumError, NotSymmetricError
from .exact import GR_ONE, GaussianRational, PhasedScalar
from .pwfun import PWFunction

__all__ = ["CheckResult", "SuiteReport", "SUITE_NAMES", "run_suite"]

_MAX_PART = 64
_WITNESS_LIMIT = 320


# -- report containers ---------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a single identity instance."""

    identity_id: str
    status: str  # "exact-pass" | "fail"
    witness: str = ""

    def to_json(self) -> dict:
        data = {"identity_id": self.identity_id, "status": self.status}
        if self.status == "fail":
            data["witness"] = self.witness
        return data


@dataclass(frozen=True)
class SuiteReport:
    """All check outcomes for one suite run, with the sampled parameters."""

    suite_name: str
    parameter_points: tuple
    checks: tuple
    seed: int

    @property
    def passed(self) -> bool:
        return all(c.status == "exact-pass" for c in self.checks)

    def to_json(self) -> dict:
        return {
            "suite_name": self.suite_name,
            "seed": self.seed,
            "passed": self.passed,
            "parameter_points": [dict(p) for p in self.parameter_points],
            "checks": [c.to_json() for c in self.checks],
        }


# -- deterministic rational draws ----------------------------------------------------------


def _frac(rng) -> Fraction:
    return Fraction(rng.randint(-_MAX_PART, _MAX_PART), rng.randint(1, _MAX_PART))


def _nonzero_frac(rng, avoid=()) -> Fraction:
    banned = {Fraction(v) for v in avoid} | {Fraction(0)}
    while True:
        q = _frac(rng)
        if q not in banned:
            return q


def _distinct_fracs(rng, count, avoid=()):
    seen = {Fraction(v) for v in avoid}
    out = []
    while len(out) < count:
        q = _frac(rng)
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


def _endpoints(rng):
    lo, hi = sorted(_distinct_fracs(rng, 2))
    return lo, hi


def _coeff(rng) -> GaussianRational:
    while True:
        c = GaussianRational(_frac(rng), _frac(rng))
        if not c.is_zero():
            return c


def _smooth(rng, dim, terms=2, degree=2) -> PWFunction:
    """A random globally-smooth function: a short exponential-polynomial sum."""
    while True:
        entries = []
        for _ in range(terms):
            mono = tuple(rng.randint(0, degree) for _ in range(dim))
            wave = tuple(GaussianRational(_frac(rng)) for _ in range(dim))
            entries.append(pwfun.Term.make(_coeff(rng), mono, wave))
        f = pwfun.from_global_terms(dim, entries)
        if not f.is_zero() or dim == 0:
            return f


def _piecewise(rng, dim, degree=1) -> PWFunction:
    """A random genuinely piecewise function: independent terms per alcove."""
    pieces = {}
    for alcove in pwfun._alcoves(dim):
        entries = []
        for _ in range(rng.choice((1, 1, 2))):
            mono = tuple(rng.randint(0, degree) for _ in range(dim))
            wave = tuple(GaussianRational(_frac(rng)) for _ in range(dim))
            entries.append(pwfun.Term.make(_coeff(rng), mono, wave))
        pieces[alcove] = entries
    return PWFunction(dim, pieces)


def _span(rng, dim, gamma, count=1):
    """A random element of the linear span of the non-symmetric wavefunctions.

    Returns the function together with the serialized spectral tuples used.
    """
    total = pwfun.zero(dim)
    spectra = []
    for _ in range(count):
        lam = _distinct_fracs(rng, dim)
        total = total + ops.psi(lam, gamma, "b_minus").scale(_coeff(rng))
        spectra.append([str(v) for v in lam])
    return total, spectra


def _str_list(values):
    return [str(v) for v in values]


# -- check plumbing ------------------------------------------------------------------------


def _eq(lhs, rhs) -> str:
    """Empty witness when both sides agree exactly, else the serialized difference."""
    diff = lhs - rhs
    if diff.is_zero():
        return ""
    return json.dumps(diff.to_json())[:_WITNESS_LIMIT]


def _zero(value) -> str:
    if value.is_zero():
        return ""
    return json.dumps(value.to_json())[:_WITNESS_LIMIT]


def _raises(exc_type, thunk) -> str:
    try:
        thunk()
    except exc_type:
        return ""
    return f"expected {exc_type.__name__} was not raised"


class _Lazy:
    """Thread-safe memo for one shared expensive value."""

    def __init__(self, fn):
        self._fn = fn
        self._lock = threading.Lock()
        self._value = None
        self._ready = False

    def __call__(self):
        with self._lock:
            if not self._ready:
                self._value = self._fn()
                self._ready = True
            return self._value


def _thread_count() -> int:
    raw = os.environ.get("HECKE_QNLS_THREADS", "1")
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(f"HECKE_QNLS_THREADS must be an integer, got {raw!r}") from None
    if count < 1:
        raise ValueError(f"HECKE_QNLS_THREADS must be >= 1, got {count}")
    return count


def _run_entries(entries):
    """Evaluate (identity_id, expect_fail, thunk) triples into sorted CheckResults."""
    thunks = [entry[2] for entry in entries]
    workers = _thread_count()
    if workers > 1 and len(thunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            witnesses = list(pool.map(lambda t: t(), thunks))
    else:
        witnesses = [t() for t in thunks]
    results = []
    for (identity_id, expect_fail, _), witness in zip(entries, witnesses):
        held = witness == ""
        if expect_fail:
            if held:
                results.append(
                    CheckResult(identity_id, "fail", "deliberately perturbed identity held exactly")
                )
            else:
                results.append(CheckResult(identity_id, "exact-pass"))
        else:
            if held:
                results.append(CheckResult(identity_id, "exact-pass"))
            else:
                results.append(CheckResult(identity_id, "fail", witness))
    results.sort(key=lambda c: c.identity_id)
    return tuple(results)


# -- small operator shorthands -------------------------------------------------------------


def _reflect(j, n, f):
    return pwfun.act_permutation(weyl.simple(j, n), f)


def _laplacian(f):
    total = pwfun.zero(f.dimension)
    for j in range(1, f.dimension + 1):
        total = total + pwfun.differentiate(j, pwfun.differentiate(j, f))
    return total


def _dunkl_square_sum(gamma, f):
    total = pwfun.zero(f.dimension)
    for j in range(1, f.dimension + 1):
        total = total + ops.dunkl(j, gamma, ops.dunkl(j, gamma, f))
    return total


def _piece_fn(f, alcove) -> PWFunction:
    return PWFunction(f.dimension, {alcove: f.piece(alcove)})


def _ehat(mu, indices, f) -> PWFunction:
    return ops.elementary_create(-1, mu, indices, f)


def _iprime(a, b, f) -> PWFunction:
    """Directed integral towards slot ``a`` cut off by the indicator x_a > x_b."""
    return pwfun.step_multiply((a, b), pwfun.integrate_direction(a, b, f))


def _iprime_fan(first, rest, f) -> PWFunction:
    """Chain of directed integrals sharing the upper slot, with the full chain cutoff."""
    g = f
    for b in reversed(rest):
        g = pwfun.integrate_direction(first, b, g)
    return pwfun.step_multiply((first,) + tuple(rest), g)


def _top_insert_alcove(out_dim, m):
    """Alcove where the last slot sits between positions m-1 and m of the others."""
    order = tuple(range(1, m)) + (out_dim,) + tuple(range(m, out_dim))
    return weyl.alcove_from_order(order)


def _scaled_phase(scalar_fraction) -> PhasedScalar:
    return PhasedScalar.phase(GaussianRational(scalar_fraction))


# -- creation-layer combinatorics ----------------------------------------------------------


def _chain_sum(gamma, indices, m, f) -> PWFunction:
    """Sum over companion tuples of cutoff-integral chains aimed at the next entry.

    Companions are increasing tuples from [m, max(indices)) disjoint from
    ``indices``; each chain factor carries one power of gamma and integrates
    its label towards the smallest entry of ``indices`` above it.
    """
    if not indices:
        return f
    used = set(indices)
    pool = [b for b in range(m, indices[-1]) if b not in used]
    total = f
    for p in range(1, len(pool) + 1):
        for companions in itertools.combinations(pool, p):
            g = f
            for b in reversed(companions):
                g = _iprime(weyl.next_label(b, indices), b, g)
            total = total + g.scale(gamma**p)
    return total


def _iprime_blocks(gamma, indices, m, f) -> PWFunction:
    """Product over consecutive runs of (1 + gamma * cutoff integral) factors."""
    l, sigma, tau = weyl.consecutive_runs(indices)
    g = f
    for k in reversed(range(l)):
        lo = (m - 1 if k == 0 else tau[k - 1]) + 1
        for b in range(sigma[k] - 1, lo - 1, -1):
            g = g + _iprime(sigma[k], b, g).scale(gamma)
    return g


def _plain_blocks(gamma, indices, m, m_tuple, f) -> PWFunction:
    """Product over runs of (1 + gamma * directed integral) factors, no cutoffs."""
    l, sigma, _tau = weyl.consecutive_runs(indices)
    g = f
    for k in reversed(range(l)):
        for b in range(sigma[k] - 1, m_tuple[k] - 1, -1):
            g = g + pwfun.integrate_direction(sigma[k], b, g).scale(gamma)
    return g


def _m_tuples(indices, m):
    """Insertion positions, one per consecutive run, each within its gap."""
    l, sigma, tau = weyl.consecutive_runs(indices)
    ranges = []
    for k in range(l):
        lo = (m - 1 if k == 0 else tau[k - 1]) + 1
        ranges.append(range(lo, sigma[k] + 1))
    return itertools.product(*ranges)


def _run_alcove_order(dim, m, indices, m_tuple):
    """Coordinate order of the single alcove selected by one insertion choice."""
    l, sigma, tau = weyl.consecutive_runs(indices)
    order = list(range(1, m))
    for k in range(l):
        lo = (m - 1 if k == 0 else tau[k - 1]) + 1
        mk = m_tuple[k]
        order.extend(range(lo, mk))
        order.append(sigma[k])
        order.extend(range(mk, sigma[k]))
        order.extend(range(sigma[k] + 1, tau[k] + 1))
    order.extend(range((tau[-1] if l else m - 1) + 1, dim + 1))
    return tuple(order)


# -- suite builders -------------------------------------------------------------------------
# Each builder returns (parameter_point_dict, [(identity_id, expect_fail, thunk), ...]).


def _build_daha_dunkl(dim, rng, p):
    gamma = _nonzero_frac(rng)
    f = _piecewise(rng, dim)
    params = {"gamma": str(gamma), "input": "piecewise"}
    entries = []

    def hecke(j, sign):
        def thunk():
            lhs = _reflect(j, dim, ops.dunkl(j, gamma, f)) - ops.dunkl(
                j + 1, gamma, _reflect(j, dim, f)
            )
            return _eq(lhs, f.scale(sign * gamma))

        return thunk

    for j in range(1, dim):
        entries.append((f"dunkl_hecke__j{j}__p{p}", False, hecke(j, 1)))
        entries.append(
            (
                f"reflection_involution__j{j}__p{p}",
                False,
                lambda j=j: _eq(_reflect(j, dim, _reflect(j, dim, f)), f),
            )
        )
        for k in range(1, dim + 1):
            if k in (j, j + 1):
                continue
            entries.append(
                (
                    f"dunkl_far_commute__j{j}_k{k}__p{p}",
                    False,
                    lambda j=j, k=k: _eq(
                        _reflect(j, dim, ops.dunkl(k, gamma, f)),
                        ops.dunkl(k, gamma, _reflect(j, dim, f)),
                    ),
                )
            )
    for j, k in itertools.combinations(range(1, dim + 1), 2):
        entries.append(
            (
                f"dunkl_commute__j{j}_k{k}__p{p}",
                False,
                lambda j=j, k=k: _eq(
                    ops.dunkl(j, gamma, ops.dunkl(k, gamma, f)),
                    ops.dunkl(k, gamma, ops.dunkl(j, gamma, f)),
                ),
            )
        )
    entries.append(
        (
            f"dunkl_square_sum__p{p}",
            False,
            lambda: _eq(_dunkl_square_sum(gamma, f), _laplacian(f)),
        )
    )
    entries.append((f"negative_control__dunkl_hecke_sign__p{p}", True, hecke(1, -1)))
    return params, entries


def _build_daha_integral(dim, rng, p):
    gamma = _nonzero_frac(rng)
    f = _smooth(rng, dim)
    perm = tuple(rng.sample(range(1, dim + 1), dim))
    j_cov, k_cov = rng.sample(range(1, dim + 1), 2)
    params = {
        "gamma": str(gamma),
        "input": "smooth",
        "covariance_permutation": list(perm),
        "covariance_pair": [j_cov, k_cov],
    }
    entries = []

    def sg(j, g):
        return ops.integral_reflection(j, gamma, g)

    def hecke(j, sign):
        def thunk():
            lhs = sg(j, pwfun.differentiate(j, f)) - pwfun.differentiate(j + 1, sg(j, f))
            return _eq(lhs, f.scale(sign * gamma))

        return thunk

    for j in range(1, dim):
        entries.append(
            (
                f"integral_involution__j{j}__p{p}",
                False,
                lambda j=j: _eq(sg(j, sg(j, f)), f),
            )
        )
        entries.append((f"integral_hecke__j{j}__p{p}", False, hecke(j, 1)))
        for k in range(1, dim + 1):
            if k in (j, j + 1):
                continue
            entries.append(
                (
                    f"integral_far_commute__j{j}_k{k}__p{p}",
                    False,
                    lambda j=j, k=k: _eq(
                        sg(j, pwfun.differentiate(k, f)),
                        pwfun.differentiate(k, sg(j, f)),
                    ),
                )
            )
    for j in range(1, dim - 1):
        entries.append(
            (
                f"integral_braid__j{j}__p{p}",
                False,
                lambda j=j: _eq(
                    sg(j, sg(j + 1, sg(j, f))),
                    sg(j + 1, sg(j, sg(j + 1, f))),
                ),
            )
        )
    entries.append(
        (
            f"integral_covariance__p{p}",
            False,
            lambda: _eq(
                pwfun.act_permutation(perm, pwfun.integrate_direction(j_cov, k_cov, f)),
                pwfun.integrate_direction(
                    perm[j_cov - 1],
                    perm[k_cov - 1],
                    pwfun.act_permutation(perm, f),
                ),
            ),
        )
    )
    for j, k in ((1, 2), (dim - 1, dim)) if dim >= 2 else ():
        entries.append(
            (
                f"wall_vanishing__j{j}_k{k}__p{p}",
                False,
                lambda j=j, k=k: _zero(
                    pwfun.wall_restriction(pwfun.integrate_direction(j, k, f), j, k, +1)
                )
                or _zero(pwfun.wall_restriction(pwfun.integrate_direction(j, k, f), j, k, -1)),
            )
        )
    entries.append((f"negative_control__integral_hecke_scale__p{p}", True, hecke(1, 2)))
    return params, entries


def _build_intertwine(dim, rng, p):
    gamma = _nonzero_frac(rng)
    f = _smooth(rng, dim) if dim <= 3 else _smooth(rng, dim, terms=1, degree=1)
    perm = tuple(rng.sample(range(1, dim + 1), dim))
    params = {"gamma": str(gamma), "input": "smooth", "word_permutation": list(perm)}
    prop_f = _Lazy(lambda: ops.propagate(gamma, f))
    entries = []
    for j in range(1, dim):
        entries.append(
            (
                f"intertwine_reflection__j{j}__p{p}",
                False,
                lambda j=j: _eq(
                    _reflect(j, dim, prop_f()),
                    ops.propagate(gamma, ops.integral_reflection(j, gamma, f)),
                ),
            )
        )
        entries.append(
            (
                f"intertwine_derivative__j{j}__p{p}",
                False,
                lambda j=j: _eq(
                    ops.dunkl(j, gamma, prop_f()),
                    ops.propagate(gamma, pwfun.differentiate(j, f)),
                ),
            )
        )
    entries.append(
        (
            f"intertwine_word__p{p}",
            False,
            lambda: _eq(
                pwfun.act_permutation(perm, prop_f()),
                ops.propagate(
                    gamma, ops.word_gamma(weyl.reduced_word(perm), gamma, f)
                ),
            ),
        )
    )

    def restricted(m):
        def thunk():
            g = f
            for b in range(dim - 1, m - 1, -1):
                g = g + pwfun.integrate_direction(dim, b, g).scale(gamma)
            alcove = weyl.alcove_from_order(
                tuple(range(1, m)) + (dim,) + tuple(range(m, dim))
            )
            return _eq(_piece_fn(prop_f(), alcove), _piece_fn(g, alcove))

        return thunk

    for m in range(1, dim + 1):
        entries.append((f"propagation_restricted__m{m}__p{p}", False, restricted(m)))
    entries.append(
        (
            f"negative_control__intertwine_plain_reflection__p{p}",
            True,
            lambda: _eq(
                _reflect(1, dim, prop_f()),
                ops.propagate(gamma, _reflect(1, dim, f)),
            ),
        )
    )
    return params, entries


def _build_recursion(dim, rng, p):
    gamma = _nonzero_frac(rng)
    lam = _distinct_fracs(rng, dim)
    mu = _frac(rng)
    lam_deg = list(lam)
    if dim >= 2:
        lam_deg[1] = lam_deg[0]
    g = _smooth(rng, dim - 1) if dim >= 1 else ops.vacuum()
    params = {"gamma": str(gamma), "lambda": _str_list(lam), "mu": str(mu)}
    prop_psi = _Lazy(lambda: ops.psi(lam, gamma, "propagation"))
    entries = [
        (
            f"psi_routes_agree__minus__p{p}",
            False,
            lambda: _eq(prop_psi(), ops.psi(lam, gamma, "b_minus")),
        ),
        (
            f"psi_routes_agree__plus__p{p}",
            False,
            lambda: _eq(prop_psi(), ops.psi(lam, gamma, "b_plus")),
        ),
        (
            f"psi_routes_agree_degenerate__p{p}",
            False,
            lambda: _eq(
                ops.psi(lam_deg, gamma, "propagation"), ops.psi(lam_deg, gamma, "b_minus")
            ),
        ),
        (
            f"propagation_intertwines_creation__minus__p{p}",
            False,
            lambda: _eq(
                ops.propagate(gamma, ops.elementary_create(-1, mu, (), g)),
                ops.create(-1, mu, gamma, ops.propagate(gamma, g)),
            ),
        ),
        (
            f"propagation_intertwines_creation__plus__p{p}",
            False,
            lambda: _eq(
                ops.propagate(gamma, ops.elementary_create(+1, mu, (), g)),
                ops.create(+1, mu, gamma, ops.propagate(gamma, g)),
            ),
        ),
        (
            f"negative_control__psi_route_reorder__p{p}",
            True,
            lambda: _eq(prop_psi(), ops.psi(tuple(reversed(lam)), gamma, "b_minus")),
        ),
    ]
    return params, entries


def _build_weyl_action(dim, rng, p):
    gamma = _nonzero_frac(rng)
    lam = _distinct_fracs(rng, dim)
    mu = _frac(rng)
    f = _piecewise(rng, dim - 1)
    perm = tuple(rng.sample(range(1, dim), dim - 1))
    params = {
        "gamma": str(gamma),
        "lambda": _str_list(lam),
        "mu": str(mu),
        "embedded_permutation": list(perm),
    }
    psi_lam = _Lazy(lambda: ops.psi(lam, gamma, "propagation"))
    entries = []

    def exchange(j, sign):
        def thunk():
            swapped = ops.psi(weyl.act_tuple(weyl.simple(j, dim), lam), gamma, "propagation")
            coeff = GaussianRational(0, sign * gamma) / GaussianRational(lam[j - 1] - lam[j])
            rhs = swapped - (psi_lam() - swapped).scale(coeff)
            return _eq(_reflect(j, dim, psi_lam()), rhs)

        return thunk

    for j in range(1, dim):
        entries.append((f"exchange_relation__j{j}__p{p}", False, exchange(j, 1)))
    for sign, tag in ((-1, "minus"), (+1, "plus")):
        entries.append(
            (
                f"creation_weyl_commute__{tag}__p{p}",
                False,
                lambda sign=sign: _eq(
                    pwfun.act_permutation(
                        weyl.embed(perm, sign), ops.create(sign, mu, gamma, f)
                    ),
                    ops.create(sign, mu, gamma, pwfun.act_permutation(perm, f)),
                ),
            )
        )
    entries.append((f"negative_control__exchange_sign__p{p}", True, exchange(1, -1)))
    return params, entries


def _build_eigen(dim, rng, p):
    gamma = _nonzero_frac(rng)
    lam = _distinct_fracs(rng, dim)
    mu = _frac(rng)
    f = _piecewise(rng, dim - 1)
    fsm = _smooth(rng, dim - 1)
    params = {"gamma": str(gamma), "lambda": _str_list(lam), "mu": str(mu)}
    psi_lam = _Lazy(lambda: ops.psi(lam, gamma, "propagation"))
    energy = sum(v * v for v in lam)
    entries = []
    for j in range(1, dim + 1):
        entries.append(
            (
                f"dunkl_eigenvalue__j{j}__p{p}",
                False,
                lambda j=j: _eq(
                    ops.dunkl(j, gamma, psi_lam()),
                    psi_lam().scale(GaussianRational(0, lam[j - 1])),
                ),
            )
        )
    entries.append(
        (
            f"laplace_eigenvalue__p{p}",
            False,
            lambda: _eq(_laplacian(psi_lam()), psi_lam().scale(GaussianRational(-energy))),
        )
    )
    entries.append(
        (
            f"dunkl_square_sum_eigenvalue__p{p}",
            False,
            lambda: _eq(
                _dunkl_square_sum(gamma, psi_lam()),
                psi_lam().scale(GaussianRational(-energy)),
            ),
        )
    )
    bminus = _Lazy(lambda: ops.create(-1, mu, gamma, f))
    bplus = _Lazy(lambda: ops.create(+1, mu, gamma, f))
    entries.append(
        (
            f"creation_eigen_slot__minus__p{p}",
            False,
            lambda: _eq(
                ops.dunkl(dim, gamma, bminus()), bminus().scale(GaussianRational(0, mu))
            ),
        )
    )
    entries.append(
        (
            f"creation_eigen_slot__plus__p{p}",
            False,
            lambda: _eq(
                ops.dunkl(1, gamma, bplus()), bplus().scale(GaussianRational(0, mu))
            ),
        )
    )
    bminus_sm = _Lazy(lambda: ops.create(-1, mu, gamma, fsm))
    bplus_sm = _Lazy(lambda: ops.create(+1, mu, gamma, fsm))
    for j in range(1, dim):
        entries.append(
            (
                f"creation_dunkl_commute__minus__j{j}__p{p}",
                False,
                lambda j=j: _eq(
                    ops.dunkl(j, gamma, bminus_sm()),
                    ops.create(-1, mu, gamma, ops.dunkl(j, gamma, fsm)),
                ),
            )
        )
        entries.append(
            (
                f"creation_dunkl_commute__plus__j{j}__p{p}",
                False,
                lambda j=j: _eq(
                    ops.dunkl(j + 1, gamma, bplus_sm()),
                    ops.create(+1, mu, gamma, ops.dunkl(j, gamma, fsm)),
                ),
            )
        )
    entries.append(
        (
            f"negative_control__eigenvalue_shift__p{p}",
            True,
            lambda: _eq(
                ops.dunkl(1, gamma, psi_lam()),
                psi_lam().scale(GaussianRational(1, lam[0])),
            ),
        )
    )
    return params, entries


def _build_creation_commutation(dim, rng, p):
    gamma = _nonzero_frac(rng)
    mu, nu = _distinct_fracs(rng, 2)
    xp, xm = _endpoints(rng)
    fspan, spectra = _span(rng, dim, gamma, count=2 if dim <= 2 else 1)
    g = _piecewise(rng, dim + 1)
    h = _piecewise(rng, dim)
    tuple_pool = [()]
    if dim >= 1:
        tuple_pool.append((rng.randint(1, dim),))
    if dim >= 2:
        tuple_pool.append(tuple(rng.sample(range(1, dim + 1), 2)))
    params = {
        "gamma": str(gamma),
        "mu": str(mu),
        "nu": str(nu),
        "x_plus": str(xp),
        "x_minus": str(xm),
        "span_spectra": spectra,
        "index_tuples": [list(t) for t in tuple_pool],
    }
    entries = [
        (
            f"creation_mixed_commute__p{p}",
            False,
            lambda: _eq(
                ops.create(+1, mu, gamma, ops.create(-1, nu, gamma, fspan)),
                ops.create(-1, nu, gamma, ops.create(+1, mu, gamma, fspan)),
            ),
        )
    ]

    def twisted(sign, tag, flip):
        def thunk():
            bmn = ops.create(sign, mu, gamma, ops.create(sign, nu, gamma, fspan))
            bnm = ops.create(sign, nu, gamma, ops.create(sign, mu, gamma, fspan))
            swap = weyl.simple(1 if sign > 0 else dim + 1, dim + 2)
            coeff = GaussianRational(0, flip * -sign * gamma) / GaussianRational(mu - nu)
            lhs = pwfun.act_permutation(swap, bmn) - bnm
            return _eq(lhs, (bmn - bnm).scale(coeff))

        return thunk

    entries.append((f"creation_twisted_commute__minus__p{p}", False, twisted(-1, "minus", 1)))
    entries.append((f"creation_twisted_commute__plus__p{p}", False, twisted(+1, "plus", 1)))

    def boundary_shift_elementary(sign, tag, indices):
        def thunk():
            shifted = tuple(v + 1 for v in indices) if sign > 0 else indices
            swap = weyl.simple(1 if sign > 0 else dim + 1, dim + 2)
            lhs = ops.elementary_create(
                sign, mu, indices, pwfun.restrict_boundary(sign, g, xp, xm)
            )
            rhs = pwfun.restrict_boundary(
                sign,
                pwfun.act_permutation(swap, ops.elementary_create(sign, mu, shifted, g)),
                xp,
                xm,
            )
            return _eq(lhs, rhs)

        return thunk

    for indices in tuple_pool:
        label = "i" + "_".join(map(str, indices)) if indices else "empty"
        for sign, tag in ((-1, "minus"), (+1, "plus")):
            entries.append(
                (
                    f"boundary_shift_elementary__{tag}__{label}__p{p}",
                    False,
                    boundary_shift_elementary(sign, tag, indices),
                )
            )

    def boundary_shift_creation(sign, tag):
        def thunk():
            swap = weyl.simple(1 if sign > 0 else dim + 1, dim + 2)
            lhs = ops.create(sign, mu, gamma, pwfun.restrict_boundary(sign, g, xp, xm))
            rhs = pwfun.restrict_boundary(
                sign,
                pwfun.act_permutation(swap, ops.create(sign, mu, gamma, g)),
                xp,
                xm,
            )
            return _eq(lhs, rhs)

        return thunk

    for sign, tag in ((-1, "minus"), (+1, "plus")):
        entries.append(
            (f"boundary_shift_creation__{tag}__p{p}", False, boundary_shift_creation(sign, tag))
        )

    def sign_bridge(indices):
        def thunk():
            perm = weyl.identity_perm(dim + 1)
            for a in range(1, dim + 1):
                perm = weyl.compose(perm, weyl.simple(a, dim + 1))
            chain = list(indices) + [dim + 1]
            for a, b in zip(chain, chain[1:]):
                perm = weyl.compose(perm, weyl.transposition(a, b, dim + 1))
            return _eq(
                ops.elementary_create(+1, mu, indices, h),
                pwfun.act_permutation(perm, ops.elementary_create(-1, mu, indices, h)),
            )

        return thunk

    for indices in tuple_pool:
        label = "i" + "_".join(map(str, indices)) if indices else "empty"
        entries.append((f"creation_sign_bridge__{label}__p{p}", False, sign_bridge(indices)))
    entries.append(
        (f"negative_control__twisted_commute_sign__p{p}", True, twisted(-1, "minus", -1))
    )
    return params, entries


def _build_yang_baxter(dim, rng, p):
    gamma = _nonzero_frac(rng)
    mu, nu = _distinct_fracs(rng, 2)
    xp, xm = _endpoints(rng)
    fspan, spec_f = _span(rng, dim, gamma, count=2 if dim <= 2 else 1)
    params = {
        "gamma": str(gamma),
        "mu": str(mu),
        "nu": str(nu),
        "x_plus": str(xp),
        "x_minus": str(xm),
        "span_spectra": spec_f,
    }

    def a(sign, s, f):
        return ops.a_op(sign, s, gamma, f, xp, xm)

    def b(sign, s, f):
        return ops.create(sign, s, gamma, f)

    def c(sign, s, f):
        return ops.c_op(sign, s, gamma, f, xp, xm)

    delta = GaussianRational(mu - nu)
    entries = []

    def ab_exchange(sign, tag, flip):
        def thunk():
            plus_coeff = GaussianRational(mu - nu, flip * sign * gamma) / delta
            cross_coeff = GaussianRational(0, flip * sign * gamma) / delta
            lhs = a(sign, mu, b(sign, nu, fspan))
            rhs = b(sign, nu, a(sign, mu, fspan)).scale(plus_coeff) - b(
                sign, mu, a(sign, nu, fspan)
            ).scale(cross_coeff)
            return _eq(lhs, rhs)

        return thunk

    def ca_exchange(sign, tag):
        def thunk():
            minus_coeff = GaussianRational(mu - nu, -sign * gamma) / delta
            cross_coeff = GaussianRational(0, sign * gamma) / delta
            lhs = c(sign, mu, a(sign, nu, fspan))
            rhs = a(sign, nu, c(sign, mu, fspan)).scale(minus_coeff) + a(
                sign, mu, c(sign, nu, fspan)
            ).scale(cross_coeff)
            return _eq(lhs, rhs)

        return thunk

    for sign, tag in ((-1, "minus"), (+1, "plus")):
        entries.append((f"companion_creation_exchange__{tag}__p{p}", False, ab_exchange(sign, tag, 1)))
        entries.append((f"annihilation_companion_exchange__{tag}__p{p}", False, ca_exchange(sign, tag)))
        entries.append(
            (
                f"companion_commute__{tag}__p{p}",
                False,
                lambda sign=sign: _eq(
                    a(sign, mu, a(sign, nu, fspan)), a(sign, nu, a(sign, mu, fspan))
                ),
            )
        )
    entries.append(
        (
            f"creation_mixed_commute_boxed__p{p}",
            False,
            lambda: _eq(
                b(+1, mu, b(-1, nu, fspan)), b(-1, nu, b(+1, mu, fspan))
            ),
        )
    )
    if dim >= 2:
        entries.append(
            (
                f"annihilation_mixed_commute__p{p}",
                False,
                lambda: _eq(c(+1, mu, c(-1, nu, fspan)), c(-1, nu, c(+1, mu, fspan))),
            )
        )
    entries.append(
        (
            f"companion_mixed_bridge__p{p}",
            False,
            lambda: _eq(
                a(+1, mu, a(-1, nu, fspan)) - a(-1, nu, a(+1, mu, fspan)),
                c(-1, nu, b(+1, mu, fspan)) - c(+1, mu, b(-1, nu, fspan)),
            ),
        )
    )
    entries.append(
        (f"negative_control__companion_creation_sign__p{p}", True, ab_exchange(-1, "minus", -1))
    )
    return params, entries


def _build_adjointness(dim, rng, p):
    gamma = _nonzero_frac(rng, avoid=(1,))
    mu = _frac(rng)
    xp, xm = _endpoints(rng)
    f = _piecewise(rng, dim - 1)
    g = _piecewise(rng, dim)
    f2 = _piecewise(rng, dim)
    g2 = _piecewise(rng, dim)
    tuple_pool = [()]
    if dim >= 2:
        tuple_pool.append((rng.randint(1, dim - 1),))
    params = {
        "gamma": str(gamma),
        "mu": str(mu),
        "x_plus": str(xp),
        "x_minus": str(xm),
        "index_tuples": [list(t) for t in tuple_pool],
    }
    phase = _scaled_phase(mu * (xp + xm))
    entries = []

    def b_adjoint(sign, tag, scaled):
        def thunk():
            lhs = pwfun.inner_product(ops.create(sign, mu, gamma, f), g, xp, xm)
            rhs = pwfun.inner_product(f, ops.c_op(-sign, mu, gamma, g, xp, xm), xp, xm)
            factor = GaussianRational(Fraction(1, 1) / gamma) if scaled else GR_ONE
            return _eq(lhs, (phase * rhs) * factor)

        return thunk

    entries.append((f"creation_annihilation_adjoint__minus__p{p}", False, b_adjoint(-1, "minus", True)))
    entries.append((f"creation_annihilation_adjoint__plus__p{p}", False, b_adjoint(+1, "plus", True)))

    def e_adjoint(indices):
        def thunk():
            out = []
            for sign in (-1, +1):
                lhs = pwfun.inner_product(
                    ops.elementary_create(sign, mu, indices, f), g, xp, xm
                )
                rhs = pwfun.inner_product(
                    f, ops.elementary_annihilate(-sign, mu, indices, g, xp, xm), xp, xm
                )
                out.append(_eq(lhs, phase * rhs))
            return out[0] or out[1]

        return thunk

    for indices in tuple_pool:
        label = "i" + "_".join(map(str, indices)) if indices else "empty"
        entries.append((f"elementary_adjoint__{label}__p{p}", False, e_adjoint(indices)))

    entries.append(
        (
            f"companion_adjoint__p{p}",
            False,
            lambda: _eq(
                pwfun.inner_product(ops.a_op(+1, mu, gamma, f2, xp, xm), g2, xp, xm),
                phase * pwfun.inner_product(f2, ops.a_op(-1, mu, gamma, g2, xp, xm), xp, xm),
            ),
        )
    )

    def boxed_elementary_adjoint(indices):
        def thunk():
            lhs = pwfun.inner_product(
                pwfun.restrict_boundary(
                    +1, ops.elementary_create(+1, mu, indices, f2), xp, xm
                ),
                g2,
                xp,
                xm,
            )
            rhs = pwfun.inner_product(
                f2,
                pwfun.restrict_boundary(
                    -1, ops.elementary_create(-1, mu, indices, g2), xp, xm
                ),
                xp,
                xm,
            )
            return _eq(lhs, phase * rhs)

        return thunk

    for indices in tuple_pool:
        label = "i" + "_".join(map(str, indices)) if indices else "empty"
        entries.append(
            (f"boxed_elementary_adjoint__{label}__p{p}", False, boxed_elementary_adjoint(indices))
        )

    def c_from_companion(sign, tag):
        def thunk():
            lhs = ops.c_op(sign, mu, gamma, g, xp, xm)
            first = pwfun.restrict_boundary(
                -sign, ops.create(sign, mu, gamma, g), xp, xm
            )
            second = ops.create(
                sign, mu, gamma, pwfun.restrict_boundary(-sign, g, xp, xm)
            )
            a_form = pwfun.restrict_boundary(sign, first - second, xp, xm)
            return _eq(lhs, a_form)

        return thunk

    def c_from_companion_direct(sign, tag):
        def thunk():
            lhs = ops.c_op(sign, mu, gamma, g, xp, xm)
            first = pwfun.restrict_boundary(
                -sign, ops.a_op(sign, mu, gamma, g, xp, xm), xp, xm
            )
            second = ops.a_op(
                sign, mu, gamma, pwfun.restrict_boundary(-sign, g, xp, xm), xp, xm
            )
            return _eq(lhs, first - second)

        return thunk

    for sign, tag in ((-1, "minus"), (+1, "plus")):
        entries.append(
            (f"annihilation_from_companion__{tag}__p{p}", False, c_from_companion_direct(sign, tag))
        )
        entries.append(
            (f"annihilation_from_creation__{tag}__p{p}", False, c_from_companion(sign, tag))
        )
    entries.append(
        (f"negative_control__adjoint_missing_factor__p{p}", True, b_adjoint(-1, "minus", False))
    )
    return params, entries


def _build_aba_expansion(dim, rng, p):
    gamma = _nonzero_frac(rng)
    lam = _distinct_fracs(rng, dim)
    mu = _nonzero_frac(rng, avoid=lam)
    xp, xm = _endpoints(rng)
    params = {
        "gamma": str(gamma),
        "lambda": _str_list(lam),
        "mu": str(mu),
        "x_plus": str(xp),
        "x_minus": str(xm),
    }
    psi_lam = _Lazy(lambda: ops.psi(lam, gamma, "b_minus"))
    entries = []

    def expansion(sign, tag, perturb):
        def thunk():
            expansion_terms = ops.aba_expand(sign, lam, mu, gamma, xp, xm)
            rhs = pwfun.zero(dim)
            first = True
            ordered = sorted(
                expansion_terms.items(),
                key=lambda kv: tuple(v.sort_key() for v in kv[0]),
            )
            for labels, coeff in ordered:
                if perturb and first:
                    coeff = coeff + coeff
                    first = False
                rhs = rhs + ops.psi(labels, gamma, "b_minus").scale(coeff)
            lhs = ops.a_op(sign, mu, gamma, psi_lam(), xp, xm)
            return _eq(lhs, rhs)

        return thunk

    entries.append((f"companion_expansion__minus__p{p}", False, expansion(-1, "minus", False)))
    entries.append((f"companion_expansion__plus__p{p}", False, expansion(+1, "plus", False)))
    entries.append(
        (
            f"degenerate_spectrum_raises__p{p}",
            False,
            lambda: _raises(
                DegenerateSpectrumError,
                lambda: ops.aba_expand(-1, lam, lam[0], gamma, xp, xm),
            ),
        )
    )
    entries.append(
        (f"negative_control__expansion_coefficient__p{p}", True, expansion(-1, "minus", True))
    )
    return params, entries


def _build_appendix_b(dim, rng, p):
    gamma = _nonzero_frac(rng)
    mu = _frac(rng)
    degree = 1 if dim <= 3 else 0
    f = _smooth(rng, dim, terms=1, degree=degree)
    params = {"gamma": str(gamma), "mu": str(mu), "input": "smooth"}
    out_dim = dim + 1
    ehat_empty = _Lazy(lambda: _ehat(mu, (), f))
    prop_top = _Lazy(lambda: ops.propagate(gamma, ehat_empty()))
    prop_f = _Lazy(lambda: ops.propagate(gamma, f))
    entries = []

    # Combinatorial scaffolding, once per report (not per point).
    if p == 0:
        def tuple_counts():
            labels = list(range(1, 8))
            for k in (0, 1, 2, 3):
                expected = 1
                for t in range(k):
                    expected *= len(labels) - t
                brute = sum(
                    1 for _ in itertools.permutations(labels, k)
                )
                if len(weyl.tuples(k, labels)) != brute or brute != expected:
                    return f"distinct-tuple count mismatch at k={k}"
                inc = len(weyl.tuples(k, labels, increasing=True))
                if inc != sum(1 for _ in itertools.combinations(labels, k)):
                    return f"increasing-tuple count mismatch at k={k}"
            return ""

        def decomposition_counts():
            for k in [(1, 2, 3), (2, 4, 5, 7), (1, 2, 3, 4, 5)]:
                for ps in range(len(k)):
                    brute = []
                    for chosen in itertools.permutations(k, ps):
                        if list(chosen) != sorted(chosen):
                            continue
                        rest = tuple(v for v in k if v not in chosen)
                        if rest and rest[-1] == k[-1]:
                            brute.append((rest, tuple(chosen)))
                    got = weyl.decompositions(k, ps)
                    if sorted(got) != sorted(brute):
                        return f"decomposition mismatch for {k}, p={ps}"
            return ""

        def runs_golden():
            if weyl.consecutive_runs((2, 4, 5, 6, 9, 10)) != (3, (2, 4, 9), (2, 6, 10)):
                return "run decomposition golden failed"
            for j, expected in ((1, 2), (3, 4), (7, 9), (8, 9)):
                if weyl.next_label(j, (2, 4, 5, 6, 9, 10)) != expected:
                    return f"next-label golden failed at {j}"
            return ""

        entries.append((f"tuple_counts__p{p}", False, tuple_counts))
        entries.append((f"decomposition_counts__p{p}", False, decomposition_counts))
        entries.append((f"run_split_golden__p{p}", False, runs_golden))

    def step_one_empty(j):
        def thunk():
            return _eq(_iprime(out_dim, j, ehat_empty()), _ehat(mu, (j,), f))

        return thunk

    for j in range(1, dim + 1):
        entries.append((f"chain_step_empty__j{j}__p{p}", False, step_one_empty(j)))

    def step_one(indices, j):
        # Valid on the support of the combined chain cutoff (where both
        # sides of the step rule are active); outside it the two sides
        # differ by clipped-versus-oriented boundary segments.
        def thunk():
            chain = (out_dim, j) + indices
            lhs = _iprime(out_dim, j, _ehat(mu, indices, f))
            rhs = _ehat(mu, (j,) + indices, f) + _ehat(
                mu, indices, _iprime(indices[0], j, f)
            )
            return _eq(
                pwfun.step_multiply(chain, lhs), pwfun.step_multiply(chain, rhs)
            )

        return thunk

    for indices in (
        t
        for n in range(1, dim + 1)
        for t in itertools.combinations(range(1, dim + 1), n)
    ):
        for j in range(1, indices[0]):
            label = "_".join(map(str, indices))
            entries.append((f"chain_step__i{label}_j{j}__p{p}", False, step_one(indices, j)))

    def chain_expansion(k):
        # Valid on the support of the chain cutoff carried by the left side.
        def thunk():
            chain = (out_dim,) + k
            lhs = _iprime_fan(out_dim, k, ehat_empty())
            rhs = pwfun.zero(out_dim)
            for ps in range(len(k)):
                for rest, chosen in weyl.decompositions(k, ps):
                    g = f
                    for b in reversed(chosen):
                        g = _iprime(weyl.next_label(b, rest), b, g)
                    rhs = rhs + _ehat(mu, rest, g)
            return _eq(lhs, pwfun.step_multiply(chain, rhs))

        return thunk

    for q in range(1, dim + 1):
        for k in itertools.combinations(range(1, dim + 1), q):
            label = "_".join(map(str, k))
            entries.append((f"chain_expansion__k{label}__p{p}", False, chain_expansion(k)))

    def propagation_creation_expansion(m):
        def thunk():
            alcove = _top_insert_alcove(out_dim, m)
            rhs = _ehat(mu, (), f)
            for nn in range(1, dim - m + 2):
                for indices in itertools.combinations(range(m, dim + 1), nn):
                    rhs = rhs + _ehat(
                        mu, indices, _chain_sum(gamma, indices, m, f)
                    ).scale(gamma**nn)
            return _eq(_piece_fn(prop_top(), alcove), _piece_fn(rhs, alcove))

        return thunk

    for m in range(1, dim + 2):
        entries.append(
            (f"propagation_creation_expansion__m{m}__p{p}", False, propagation_creation_expansion(m))
        )

    admissible = [
        (m, indices)
        for m in range(1, dim + 2)
        for nn in range(0, dim - m + 2)
        for indices in itertools.combinations(range(m, dim + 1), nn)
    ]

    def binned_chains(m, indices):
        def thunk():
            return _eq(
                _chain_sum(gamma, indices, m, f), _iprime_blocks(gamma, indices, m, f)
            )

        return thunk

    def insertion_split(m, indices):
        def thunk():
            alcove = _top_insert_alcove(out_dim, m)
            total = pwfun.zero(out_dim)
            for mt in _m_tuples(indices, m):
                cell = weyl.alcove_from_order(_run_alcove_order(dim, m, indices, mt))
                total = total + _ehat(mu, indices, _piece_fn(f, cell))
            return _eq(
                _piece_fn(_ehat(mu, indices, f), alcove), _piece_fn(total, alcove)
            )

        return thunk

    def propagated_insertion_split(m, indices):
        def thunk():
            alcove = _top_insert_alcove(out_dim, m)
            total = pwfun.zero(out_dim)
            for mt in _m_tuples(indices, m):
                cell = weyl.alcove_from_order(_run_alcove_order(dim, m, indices, mt))
                total = total + _ehat(
                    mu, indices, _piece_fn(_plain_blocks(gamma, indices, m, mt, f), cell)
                )
            return _eq(
                _piece_fn(_ehat(mu, indices, prop_f()), alcove), _piece_fn(total, alcove)
            )

        return thunk

    def propagated_block_product(m, indices):
        def thunk():
            alcove = _top_insert_alcove(out_dim, m)
            rhs = _ehat(mu, indices, _iprime_blocks(gamma, indices, m, f))
            return _eq(
                _piece_fn(_ehat(mu, indices, prop_f()), alcove), _piece_fn(rhs, alcove)
            )

        return thunk

    for m, indices in admissible:
        label = ("i" + "_".join(map(str, indices))) if indices else "empty"
        entries.append((f"binned_chains__m{m}_{label}__p{p}", False, binned_chains(m, indices)))
        entries.append((f"insertion_split__m{m}_{label}__p{p}", False, insertion_split(m, indices)))
        entries.append(
            (
                f"propagated_insertion_split__m{m}_{label}__p{p}",
                False,
                propagated_insertion_split(m, indices),
            )
        )
        entries.append(
            (
                f"propagated_block_product__m{m}_{label}__p{p}",
                False,
                propagated_block_product(m, indices),
            )
        )

    def wrong_label():
        if dim < 2:
            return _eq(_iprime(out_dim, 1, ehat_empty()), _ehat(mu, (1,), f).scale(2))
        return _eq(_iprime(out_dim, 1, ehat_empty()), _ehat(mu, (2,), f))

    entries.append((f"negative_control__chain_step_label__p{p}", True, wrong_label))
    return params, entries


def _build_helmholtz_jump(dim, rng, p):
    gamma = _nonzero_frac(rng, avoid=(-1,))
    lam = _distinct_fracs(rng, dim)
    params = {"gamma": str(gamma), "lambda": _str_list(lam)}
    energy = sum(v * v for v in lam)
    psi_lam = _Lazy(lambda: ops.psi(lam, gamma, "b_minus"))
    sym = _Lazy(lambda: bethe.lieb_liniger_psi(lam, gamma))
    entries = [
        (
            f"helmholtz_nonsymmetric__p{p}",
            False,
            lambda: _eq(_laplacian(psi_lam()), psi_lam().scale(GaussianRational(-energy))),
        ),
        (
            f"helmholtz_symmetric__p{p}",
            False,
            lambda: _eq(_laplacian(sym()), sym().scale(GaussianRational(-energy))),
        ),
    ]
    for j, k in itertools.combinations(range(1, dim + 1), 2):
        entries.append(
            (
                f"derivative_jump_nonsymmetric__j{j}_k{k}__p{p}",
                False,
                lambda j=j, k=k: _zero(pwfun.jump_residual(psi_lam(), j, k, gamma)),
            )
        )
        entries.append(
            (
                f"derivative_jump_symmetric__j{j}_k{k}__p{p}",
                False,
                lambda j=j, k=k: _zero(pwfun.jump_residual(sym(), j, k, gamma)),
            )
        )
    entries.append(
        (
            f"negative_control__jump_perturbed_coupling__p{p}",
            True,
            lambda: _zero(pwfun.jump_residual(psi_lam(), 1, 2, gamma + 1)),
        )
    )
    return params, entries


def _build_symmetric_layer(dim, rng, p):
    gamma = _nonzero_frac(rng)
    mu, nu = _distinct_fracs(rng, 2)
    xp, xm = _endpoints(rng)
    lam = _distinct_fracs(rng, dim)
    h = _piecewise(rng, dim)
    params = {
        "gamma": str(gamma),
        "mu": str(mu),
        "nu": str(nu),
        "x_plus": str(xp),
        "x_minus": str(xm),
        "lambda": _str_list(lam),
    }
    F = _Lazy(lambda: bethe.lieb_liniger_psi(lam, gamma))

    def ent(which, s, f):
        return ops.monodromy_entry(which, s, gamma, f, xp, xm)

    entries = []
    for sign, tag in ((-1, "minus"), (+1, "plus")):
        entries.append(
            (
                f"symmetrize_create_commute__{tag}__p{p}",
                False,
                lambda sign=sign: _eq(
                    ops.symmetrize(ops.create(sign, mu, gamma, h)),
                    ent("B", mu, ops.symmetrize(h)),
                ),
            )
        )

    def chain(perturb):
        def thunk():
            built = ops.vacuum()
            for v in lam:
                built = ent("B", v, built)
            target = bethe.lieb_liniger_psi(lam, gamma)
            if perturb:
                target = target.scale(2)
            return _eq(built, target)

        return thunk

    entries.append((f"creation_chain_closed_form__p{p}", False, chain(False)))
    entries.append(
        (
            f"symmetrized_psi_closed_form__p{p}",
            False,
            lambda: _eq(ops.symmetrize(ops.psi(lam, gamma, "b_minus")), F()),
        )
    )
    if p == 0:
        entries.append(
            (
                f"gamma_factor_golden__p{p}",
                False,
                lambda: ""
                if bethe.gamma_factor((2, 1), 1) == GaussianRational(1, -1)
                else "coincidence factor golden failed",
            )
        )
        if dim >= 2:
            entries.append(
                (
                    f"entry_requires_symmetric__p{p}",
                    False,
                    lambda: _raises(
                        NotSymmetricError,
                        lambda: ent("A", mu, ops.psi(lam, gamma, "b_minus")),
                    ),
                )
            )
    entries.append(
        (
            f"entry_commute_AA__p{p}",
            False,
            lambda: _eq(ent("A", mu, ent("A", nu, F())), ent("A", nu, ent("A", mu, F()))),
        )
    )
    entries.append(
        (
            f"entry_commute_DD__p{p}",
            False,
            lambda: _eq(ent("D", mu, ent("D", nu, F())), ent("D", nu, ent("D", mu, F()))),
        )
    )
    entries.append(
        (
            f"entry_commute_BB__p{p}",
            False,
            lambda: _eq(ent("B", mu, ent("B", nu, F())), ent("B", nu, ent("B", mu, F()))),
        )
    )
    if dim >= 2:
        entries.append(
            (
                f"entry_commute_CC__p{p}",
                False,
                lambda: _eq(
                    ent("C", mu, ent("C", nu, F())), ent("C", nu, ent("C", mu, F()))
                ),
            )
        )
    coeff = GaussianRational(0, gamma) / GaussianRational(mu - nu)

    entries.append(
        (
            f"entry_exchange_AB__p{p}",
            False,
            lambda: _eq(
                ent("A", mu, ent("B", nu, F())) - ent("B", nu, ent("A", mu, F())),
                (ent("B", mu, ent("A", nu, F())) - ent("B", nu, ent("A", mu, F()))).scale(
                    -coeff
                ),
            ),
        )
    )
    entries.append(
        (
            f"entry_exchange_DB__p{p}",
            False,
            lambda: _eq(
                ent("D", mu, ent("B", nu, F())) - ent("B", nu, ent("D", mu, F())),
                (ent("B", mu, ent("D", nu, F())) - ent("B", nu, ent("D", mu, F()))).scale(
                    coeff
                ),
            ),
        )
    )
    entries.append(
        (
            f"entry_exchange_AC__p{p}",
            False,
            lambda: _eq(
                ent("A", mu, ent("C", nu, F())) - ent("C", nu, ent("A", mu, F())),
                (ent("C", mu, ent("A", nu, F())) - ent("C", nu, ent("A", mu, F()))).scale(
                    coeff
                ),
            ),
        )
    )
    entries.append(
        (
            f"entry_exchange_DC__p{p}",
            False,
            lambda: _eq(
                ent("D", mu, ent("C", nu, F())) - ent("C", nu, ent("D", mu, F())),
                (ent("C", mu, ent("D", nu, F())) - ent("C", nu, ent("D", mu, F()))).scale(
                    -coeff
                ),
            ),
        )
    )
    entries.append((f"negative_control__chain_scale__p{p}", True, chain(True)))
    return params, entries


def _build_experimental_full_space(dim, rng, p):
    gamma = _nonzero_frac(rng)
    mu, nu = _distinct_fracs(rng, 2)
    xp, xm = _endpoints(rng)
    h = _piecewise(rng, dim)
    params = {
        "gamma": str(gamma),
        "mu": str(mu),
        "nu": str(nu),
        "x_plus": str(xp),
        "x_minus": str(xm),
        "input": "piecewise",
    }
    entries = []

    def twisted_full(sign, tag):
        def thunk():
            bmn = ops.create(sign, mu, gamma, ops.create(sign, nu, gamma, h))
            bnm = ops.create(sign, nu, gamma, ops.create(sign, mu, gamma, h))
            swap = weyl.simple(1 if sign > 0 else dim + 1, dim + 2)
            coeff = GaussianRational(0, -sign * gamma) / GaussianRational(mu - nu)
            return _eq(pwfun.act_permutation(swap, bmn) - bnm, (bmn - bnm).scale(coeff))

        return thunk

    entries.append(
        (f"experimental__twisted_commute_full__minus__p{p}", False, twisted_full(-1, "minus"))
    )
    entries.append(
        (f"experimental__twisted_commute_full__plus__p{p}", False, twisted_full(+1, "plus"))
    )
    entries.append(
        (
            f"experimental__mixed_commute_full__p{p}",
            False,
            lambda: _eq(
                ops.create(+1, mu, gamma, ops.create(-1, nu, gamma, h)),
                ops.create(-1, nu, gamma, ops.create(+1, mu, gamma, h)),
            ),
        )
    )

    entries.append(
        (
            f"negative_control__mixed_commute_scaled__p{p}",
            True,
            lambda: _eq(
                ops.create(+1, mu, gamma, ops.create(-1, nu, gamma, h)),
                ops.create(-1, nu, gamma, ops.create(+1, mu, gamma, h)).scale(2),
            ),
        )
    )
    return params, entries


# -- registry and driver ---------------------------------------------------------------------


_BUILDERS = {
    "daha_dunkl": _build_daha_dunkl,
    "daha_integral": _build_daha_integral,
    "intertwine": _build_intertwine,
    "recursion": _build_recursion,
    "weyl_action": _build_weyl_action,
    "eigen": _build_eigen,
    "creation_commutation": _build_creation_commutation,
    "yang_baxter": _build_yang_baxter,
    "adjointness": _build_adjointness,
    "aba_expansion": _build_aba_expansion,
    "appendix_b": _build_appendix_b,
    "helmholtz_jump": _build_helmholtz_jump,
    "symmetric_layer": _build_symmetric_layer,
    "experimental_full_space": _build_experimental_full_space,
}

SUITE_NAMES = tuple(_BUILDERS)

_DEFAULT_DIMENSION = {
    "daha_dunkl": 3,
    "daha_integral": 3,
    "intertwine": 3,
    "recursion": 3,
    "weyl_action": 3,
    "eigen": 3,
    "creation_commutation": 2,
    "yang_baxter": 2,
    "adjointness": 2,
    "aba_expansion": 2,
    "appendix_b": 3,
    "helmholtz_jump": 3,
    "symmetric_layer": 2,
    "experimental_full_space": 2,
}

_MIN_DIMENSION = {
    "daha_dunkl": 2,
    "daha_integral": 2,
    "intertwine": 2,
    "recursion": 1,
    "weyl_action": 2,
    "eigen": 1,
    "creation_commutation": 1,
    "yang_baxter": 1,
    "adjointness": 1,
    "aba_expansion": 1,
    "appendix_b": 1,
    "helmholtz_jump": 2,
    "symmetric_layer": 1,
    "experimental_full_space": 1,
}


def run_suite(name: str, dimension=None, seed: int = 0, points: int = 3) -> SuiteReport:
    """Run one named identity suite at random rational parameter points.

    ``dimension`` is the base coordinate count (suite-specific default when
    omitted), ``seed`` fixes every random draw, and ``points`` is the number
    of independent parameter points.
    """
    if name not in _BUILDERS:
        known = ", ".join(SUITE_NAMES)
        raise ValueError(f"unknown suite {name!r}; known suites: {known}")
    if points < 1:
        raise ValueError("points must be >= 1")
    dim = _DEFAULT_DIMENSION[name] if dimension is None else int(dimension)
    if dim < _MIN_DIMENSION[name]:
        raise ValueError(
            f"suite {name!r} needs dimension >= {_MIN_DIMENSION[name]}, got {dim}"
        )
    rng = random.Random(seed)
    parameter_points = []
    entries = []
    for p in range(points):
        point_params, point_entries = _BUILDERS[name](dim, rng, p)
        point_params = {"point": p, "dimension": dim, **point_params}
        parameter_points.append(point_params)
        entries.extend(point_entries)
    checks = _run_entries(entries)
    return SuiteReport(
        suite_name=name,
        parameter_points=tuple(parameter_points),
        checks=checks,
        seed=seed,
    )
