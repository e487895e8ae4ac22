"""Symmetric closed-form wavefunctions, the numeric solver for the
quantization conditions on a box, and periodicity diagnostics.

Exact constructions (rational spectral values) live alongside a small
float engine used when the spectral values are irrational solver output.
"""

from __future__ import annotations

import cmath
import json
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import weyl
from .errors import (
    DegenerateSpectrumError,
    NoConvergenceError,
    UnsupportedRegimeError,
)
from .exact import GR_I, GR_ONE, GaussianRational
from .pwfun import PWFunction, Term, _alcoves
from . import pwfun as _pw

__all__ = [
    "gamma_factor",
    "lieb_liniger_psi",
    "BetheRoots",
    "solve_bae",
    "periodicity_residual",
    "NumericPW",
    "numeric_psi",
    "numeric_lieb_liniger_psi",
]


# -- exact symmetric closed form -----------------------------------------------------


def gamma_factor(lam, gamma) -> GaussianRational:
    """Product over ordered pairs of (difference - i*coupling)/difference."""
    lam = tuple(GaussianRational.coerce(v) for v in lam)
    gamma = GaussianRational.coerce(gamma)
    ig = GR_I * gamma
    out = GR_ONE
    for j in range(len(lam)):
        for k in range(j + 1, len(lam)):
            d = lam[j] - lam[k]
            if d.is_zero():
                raise DegenerateSpectrumError(
                    "closed form requires pairwise distinct spectral values"
                )
            out = out * ((d - ig) / d)
    return out


def lieb_liniger_psi(lam, gamma) -> PWFunction:
    """Symmetric wavefunction from the closed form: on the fundamental
    alcove the group average of weighted plane waves, extended everywhere
    by symmetry."""
    lam = tuple(GaussianRational.coerce(v) for v in lam)
    gamma = GaussianRational.coerce(gamma)
    n = len(lam)
    norm = GaussianRational(Fraction(1, _factorial(n)))
    fundamental = []
    for w in _alcoves(n):
        wl = weyl.act_tuple(w, lam)
        coeff = gamma_factor(wl, gamma) * norm
        fundamental.append((coeff, wl))
    pieces = {}
    for alcove in _alcoves(n):
        u = weyl.inverse(alcove)
        pieces[alcove] = [
            Term.make(coeff, (0,) * n, weyl.act_tuple(u, wl))
            for coeff, wl in fundamental
        ]
    return PWFunction(n, pieces)


def _factorial(n: int) -> int:
    out = 1
    for t in range(2, n + 1):
        out *= t
    return out


# -- quantization-condition solver ----------------------------------------------------


@dataclass(frozen=True)
class BetheRoots:
    """Numeric root vector of the box quantization conditions."""

    lambdas: tuple
    quantum_numbers: tuple
    gamma: float
    L: float
    residual: float

    def __post_init__(self):
        lams = tuple(float(v) for v in self.lambdas)
        if any(lams[t] >= lams[t + 1] for t in range(len(lams) - 1)):
            raise ValueError("root vector must be strictly increasing")
        object.__setattr__(self, "lambdas", lams)
        object.__setattr__(
            self, "quantum_numbers", tuple(Fraction(q) for q in self.quantum_numbers)
        )

    def to_json(self) -> dict:
        return {
            "lambdas": list(self.lambdas),
            "quantum_numbers": [str(q) for q in self.quantum_numbers],
            "gamma": self.gamma,
            "L": self.L,
            "residual": self.residual,
        }

    @staticmethod
    def from_json(data: dict) -> "BetheRoots":
        return BetheRoots(
            tuple(data["lambdas"]),
            tuple(Fraction(q) for q in data["quantum_numbers"]),
            float(data["gamma"]),
            float(data["L"]),
            float(data["residual"]),
        )

    def to_csv(self) -> str:
        lines = ["index,quantum_number,lambda"]
        for t, (q, v) in enumerate(zip(self.quantum_numbers, self.lambdas), 1):
            lines.append(f"{t},{q},{v!r}")
        return "\n".join(lines) + "\n"


def default_quantum_numbers(n: int) -> tuple:
    """Ground-state ladder: consecutive, symmetric around zero, integers
    for odd n and half-odd integers for even n."""
    return tuple(Fraction(2 * j - n - 1, 2) for j in range(1, n + 1))


def product_residual(lambdas, gamma: float, length: float) -> float:
    """Largest relative defect of the product-form quantization conditions."""
    lams = [float(v) for v in lambdas]
    worst = 0.0
    for j, lj in enumerate(lams):
        lhs = cmath.exp(1j * lj * length)
        num = 1.0 + 0j
        den = 1.0 + 0j
        for k, lk in enumerate(lams):
            if k != j:
                num *= lj - lk + 1j * gamma
                den *= lj - lk - 1j * gamma
        worst = max(worst, abs(lhs * den - num) / abs(num))
    return worst


def solve_bae(
    n: int,
    gamma: float,
    length: float,
    quantum_numbers=None,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> BetheRoots:
    """Damped Newton iteration on the logarithmic quantization system

        lambda_j * L + sum_{k != j} 2*arctan((lambda_j - lambda_k)/gamma)
            = 2*pi*n_j.

    Success additionally requires the product-form residual below 1e-10.
    """
    gamma = float(gamma)
    length = float(length)
    if gamma <= 0:
        raise UnsupportedRegimeError("only a positive coupling is supported")
    if length <= 0:
        raise ValueError("box length must be positive")
    if quantum_numbers is None:
        qn = default_quantum_numbers(n)
    else:
        qn = tuple(Fraction(q) for q in quantum_numbers)
    if len(qn) != n:
        raise ValueError("need exactly one quantum number per root")
    if len(set(qn)) != n:
        raise ValueError("quantum numbers must be distinct")
    for q in qn:
        double = 2 * q
        if double.denominator != 1:
            raise ValueError("quantum numbers must be integer or half-odd")
        if (double.numerator - (n + 1)) % 2 != 0:
            raise ValueError(
                "quantum numbers must be integers for odd n and"
                " half-odd integers for even n"
            )
    qn = tuple(sorted(qn))
    target = 2.0 * np.pi * np.array([float(q) for q in qn])
    lam = target / length

    def defect(v):
        diff = v[:, None] - v[None, :]
        return v * length + np.sum(2.0 * np.arctan(diff / gamma), axis=1) - target

    f = defect(lam)
    for _ in range(max_iter):
        if np.max(np.abs(f)) < tol:
            break
        diff = lam[:, None] - lam[None, :]
        kernel = 2.0 * gamma / (gamma**2 + diff**2)
        np.fill_diagonal(kernel, 0.0)
        jac = np.diag(length + kernel.sum(axis=1)) - kernel
        step = np.linalg.solve(jac, f)
        scale = 1.0
        norm = np.linalg.norm(f)
        for _half in range(60):
            trial = lam - scale * step
            f_trial = defect(trial)
            if np.linalg.norm(f_trial) < norm:
                break
            scale *= 0.5
        lam = lam - scale * step
        f = defect(lam)
    residual = product_residual(lam, gamma, length)
    if residual >= 1e-10:
        raise NoConvergenceError(
            f"quantization residual {residual:.3e} above tolerance",
            residual=residual,
        )
    return BetheRoots(tuple(lam), qn, gamma, length, residual)


# -- float engine for irrational spectral values ---------------------------------------


class NumericPW:
    """Float counterpart of the exact piecewise container, restricted to
    pure exponential terms: per alcove a map wavevector -> complex weight."""

    __slots__ = ("dimension", "pieces")

    def __init__(self, dimension: int, pieces: dict):
        self.dimension = dimension
        self.pieces = pieces

    def evaluate(self, x) -> complex:
        point = tuple(float(v) for v in x)
        alcove = weyl.alcove_of(point)
        total = 0.0 + 0j
        for wave, coeff in self.pieces.get(alcove, {}).items():
            total += coeff * cmath.exp(1j * sum(k * v for k, v in zip(wave, point)))
        return total

    def derivative_evaluate(self, j: int, x) -> complex:
        point = tuple(float(v) for v in x)
        alcove = weyl.alcove_of(point)
        total = 0.0 + 0j
        for wave, coeff in self.pieces.get(alcove, {}).items():
            total += (
                coeff
                * 1j
                * wave[j - 1]
                * cmath.exp(1j * sum(k * v for k, v in zip(wave, point)))
            )
        return total


def _numeric_reflection_integral(j: int, gamma: float, terms: dict) -> dict:
    """Image of a global exponential sum under the deformed reflection:
    swapped waves plus coupling times the smooth directional integral."""
    out = {}

    def add(wave, coeff):
        if wave in out:
            out[wave] = out[wave] + coeff
        else:
            out[wave] = coeff

    for wave, coeff in terms.items():
        swapped = list(wave)
        swapped[j - 1], swapped[j] = swapped[j], swapped[j - 1]
        swapped = tuple(swapped)
        add(swapped, coeff)
        q = wave[j - 1] - wave[j]
        if abs(q) < 1e-12:
            raise DegenerateSpectrumError(
                "float route requires pairwise distinct spectral values"
            )
        factor = -1j * gamma / q
        add(wave, factor * coeff)
        add(swapped, -factor * coeff)
    return {w: c for w, c in out.items() if abs(c) > 0.0}


def numeric_psi(lambdas, gamma: float) -> NumericPW:
    """Non-symmetric wavefunction at float spectral values, built by the
    deformed-word route; all intermediate images of a plane wave are global
    exponential sums, so only the final per-alcove assembly is piecewise."""
    lams = tuple(float(v) for v in lambdas)
    gamma = float(gamma)
    n = len(lams)
    ident = weyl.identity_perm(n)
    cache = {ident: {lams: 1.0 + 0j}}
    order = sorted(_alcoves(n), key=weyl.length)
    for w in order:
        if w == ident:
            continue
        jj = weyl.left_descent(w)
        shorter = weyl.compose(weyl.simple(jj, n), w)
        cache[w] = _numeric_reflection_integral(jj, gamma, cache[shorter])
    pieces = {}
    for w in order:
        u = weyl.inverse(w)
        pieces[w] = {
            weyl.act_tuple(u, wave): coeff for wave, coeff in cache[w].items()
        }
    return NumericPW(n, pieces)


def numeric_lieb_liniger_psi(lambdas, gamma: float) -> NumericPW:
    """Symmetric closed form at float spectral values."""
    lams = tuple(float(v) for v in lambdas)
    gamma = float(gamma)
    n = len(lams)
    fundamental = {}
    for w in _alcoves(n):
        wl = weyl.act_tuple(w, lams)
        coeff = 1.0 + 0j
        for j in range(n):
            for k in range(j + 1, n):
                d = wl[j] - wl[k]
                coeff *= (d - 1j * gamma) / d
        fundamental[wl] = coeff / _factorial(n)
    pieces = {}
    for alcove in _alcoves(n):
        u = weyl.inverse(alcove)
        pieces[alcove] = {
            weyl.act_tuple(u, wave): coeff for wave, coeff in fundamental.items()
        }
    return NumericPW(n, pieces)


# -- periodicity diagnostics ------------------------------------------------------------


def periodicity_residual(
    f, j: int, xplus, xminus, sample_count: int = 100, seed: int = 0
) -> float:
    """Largest sampled defect of box periodicity in the j-th coordinate:
    both the value and the first-derivative mismatch between the two faces
    x_j = xplus and x_j = xminus, each evaluated as a one-sided limit from
    the box interior."""
    n = f.dimension
    if not 1 <= j <= n:
        raise ValueError(f"slot {j} out of range")
    xp, xm = float(xplus), float(xminus)
    if not xm > xp:
        raise ValueError("box endpoints must satisfy xminus > xplus")
    rng = random.Random(seed)
    worst = 0.0
    produced = 0
    while produced < sample_count:
        point = [rng.uniform(xp, xm) for _ in range(n)]
        coords = [v for t, v in enumerate(point, 1) if t != j]
        values = coords + [xp, xm]
        if min(
            abs(a - b) for i, a in enumerate(values) for b in values[i + 1 :]
        ) < 1e-6 * (xm - xp):
            continue
        produced += 1
        low = list(point)
        low[j - 1] = xp
        high = list(point)
        high[j - 1] = xm
        worst = max(worst, abs(_value(f, low) - _value(f, high)))
        worst = max(worst, abs(_derivative(f, j, low) - _derivative(f, j, high)))
    return worst


def _value(f, x) -> complex:
    if isinstance(f, NumericPW):
        return f.evaluate(x)
    return _pw.evaluate(f, x)


def _derivative(f, j, x) -> complex:
    if isinstance(f, NumericPW):
        return f.derivative_evaluate(j, x)
    return _pw.evaluate(_pw.differentiate(j, f), x)
