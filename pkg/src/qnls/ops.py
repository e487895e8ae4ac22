"""Operator calculus on piecewise functions: Dunkl-type and
integral-reflection operators, the propagation operator, creation and
annihilation chains, boundary companions, the symmetrizer, and the exact
algebraic expansion of the boundary operators on wavefunctions.

Sign conventions: ``sign=-1`` operators act through the last slot (new or
removed coordinate at position N+1), ``sign=+1`` through the first slot.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import weyl
from .errors import DegenerateSpectrumError, NotSymmetricError
from .exact import GR_I, GR_ONE, GR_ZERO, GaussianRational, PhasedScalar
from .pwfun import (
    PWFunction,
    Term,
    _alcoves,
    _antiderivative,
    act_permutation,
    differentiate,
    integrate_direction,
    plane_wave,
    restrict_boundary,
    zero,
)

__all__ = [
    "lambda_aux",
    "dunkl",
    "integral_reflection",
    "word_gamma",
    "propagate",
    "elementary_create",
    "create",
    "a_op",
    "elementary_annihilate",
    "c_op",
    "symmetrize",
    "monodromy_entry",
    "vacuum",
    "psi",
    "aba_expand",
    "OPERATOR_NAMES",
    "apply",
]


# -- Dunkl-type operators ----------------------------------------------------------


def lambda_aux(j: int, f: PWFunction) -> PWFunction:
    """Alcove-local exchange sum: on the alcove labeled w the value is
    sum_{k: (k,j) inverted by w} s_{jk} f - sum_{k: (j,k) inverted by w} s_{jk} f.
    """
    n = f.dimension
    if not 1 <= j <= n:
        raise ValueError(f"slot {j} out of range")
    acted = {}
    for k in range(1, n + 1):
        if k != j:
            acted[k] = act_permutation(weyl.transposition(j, k, n), f)
    out = {}
    for alcove in _alcoves(n):
        terms = []
        for k in range(1, n + 1):
            if k == j:
                continue
            lo, hi = min(j, k), max(j, k)
            if alcove[lo - 1] <= alcove[hi - 1]:
                continue
            piece = acted[k].pieces.get(alcove, ())
            if k < j:
                terms.extend(piece)
            else:
                terms.extend(
                    Term(-t.coeff, t.monomial, t.wavevector, t.phase)
                    for t in piece
                )
        if terms:
            out[alcove] = terms
    return PWFunction(n, out)


def dunkl(j: int, gamma, f: PWFunction) -> PWFunction:
    """Dunkl-type derivative: plain derivative minus gamma times the
    alcove-local exchange sum."""
    gamma = GaussianRational.coerce(gamma)
    return differentiate(j, f) - lambda_aux(j, f).scale(gamma)


# -- integral-reflection operators and the propagation operator --------------------


def integral_reflection(j: int, gamma, f: PWFunction) -> PWFunction:
    """Reflection in the wall x_j = x_{j+1} plus gamma times the directional
    integral toward it."""
    n = f.dimension
    if not 1 <= j <= n - 1:
        raise ValueError(f"simple reflection index {j} out of range")
    gamma = GaussianRational.coerce(gamma)
    out = act_permutation(weyl.simple(j, n), f)
    if not gamma.is_zero():
        out = out + integrate_direction(j, j + 1, f).scale(gamma)
    return out


def word_gamma(word, gamma, f: PWFunction) -> PWFunction:
    """Composition of integral-reflection operators; the rightmost letter of
    the word acts first."""
    for j in reversed(tuple(word)):
        f = integral_reflection(j, gamma, f)
    return f


def propagate(gamma, f: PWFunction) -> PWFunction:
    """Propagation operator: on the alcove labeled w the result equals
    w^{-1} applied to (the deformed word of w applied to f).

    Deformed words are grown one letter at a time along weak order, so each
    of the N! pieces costs one integral-reflection application.
    """
    n = f.dimension
    gamma = GaussianRational.coerce(gamma)
    ident = weyl.identity_perm(n)
    cache = {ident: f}
    order = sorted(_alcoves(n), key=weyl.length)
    for w in order:
        if w == ident:
            continue
        j = weyl.left_descent(w)
        shorter = weyl.compose(weyl.simple(j, n), w)
        cache[w] = integral_reflection(j, gamma, cache[shorter])
    out = {}
    for w in order:
        u = weyl.inverse(w)
        source = cache[w].pieces.get(ident)
        if source:
            out[w] = [
                Term(
                    t.coeff,
                    weyl.act_tuple(u, t.monomial),
                    weyl.act_tuple(u, t.wavevector),
                    t.phase,
                )
                for t in source
            ]
    return PWFunction(n, out)


# -- generic multi-band integration core --------------------------------------------


def _marker_position(marker, rank, top_pos, bottom_pos):
    kind = marker[0]
    if kind == "slot":
        return rank[marker[1]]
    if kind == "top":
        return top_pos
    if kind == "bottom":
        return bottom_pos
    raise ValueError(f"unknown marker {marker}")


def _band_apply(f, out_dim, moving, assign, static_wave, static_phase, chain):
    """Apply a product of one-dimensional band integrals to f.

    moving: per integration variable (f_slot, lower, upper, extra_q) where
        lower/upper are markers ('slot', s) for an output coordinate or
        ('top', value)/('bottom', value) for a constant above/below all
        coordinates; the integrand carries e^{i*extra_q*y} beyond the
        slot's own exponential.
    assign: f_slot -> output slot for the non-integrated arguments.
    static_wave / static_phase: exact exponent additions of the prefactors.
    chain: output slots required to be in strictly descending coordinate
        order (the result vanishes elsewhere).
    """
    out = {}
    for alcove in _alcoves(out_dim):
        ranks = {s: r for r, s in enumerate(weyl.descending_slots(alcove), 1)}
        if any(
            ranks[chain[t]] >= ranks[chain[t + 1]] for t in range(len(chain) - 1)
        ):
            continue
        top_pos, bottom_pos = 0, out_dim + 1
        var_segments = []
        for f_slot, lower, upper, extra_q in moving:
            lo_pos = _marker_position(lower, ranks, top_pos, bottom_pos)
            hi_pos = _marker_position(upper, ranks, top_pos, bottom_pos)
            if hi_pos >= lo_pos:
                var_segments = None
                break
            boundaries = [upper]
            for pos in range(hi_pos + 1, lo_pos):
                slot = next(s for s, r in ranks.items() if r == pos)
                boundaries.append(("slot", slot))
            boundaries.append(lower)
            segments = []
            for t in range(len(boundaries) - 1):
                seg_upper = boundaries[t]
                seg_lower = boundaries[t + 1]
                key = Fraction(
                    _marker_position(seg_upper, ranks, top_pos, bottom_pos) * 2 + 1,
                    2,
                )
                segments.append((f_slot, seg_lower, seg_upper, extra_q, key))
            var_segments.append(segments)
        if var_segments is None:
            continue

        terms_out = []
        for box in itertools.product(*var_segments):
            ordering = [
                (Fraction(ranks[out_slot]), f_slot)
                for f_slot, out_slot in assign.items()
            ]
            ordering.extend((key, f_slot) for f_slot, *_rest, key in box)
            ordering.sort()
            source_alcove = weyl.alcove_from_order([s for _, s in ordering])
            piece = f.pieces.get(source_alcove, ())
            if not piece:
                continue
            for t in piece:
                base_mono = [0] * out_dim
                base_wave = list(static_wave)
                for f_slot, out_slot in assign.items():
                    base_mono[out_slot - 1] += t.monomial[f_slot - 1]
                    base_wave[out_slot - 1] = (
                        base_wave[out_slot - 1] + t.wavevector[f_slot - 1]
                    )
                states = [(t.coeff, t.phase + static_phase, base_mono, base_wave)]
                for f_slot, seg_lower, seg_upper, extra_q, _key in box:
                    power = t.monomial[f_slot - 1]
                    q = t.wavevector[f_slot - 1] + extra_q
                    parts = _antiderivative(power, q)
                    new_states = []
                    for coeff, phase, mono, wave in states:
                        for part_coeff, part_pow in parts:
                            for sign, marker in (
                                (GR_ONE, seg_upper),
                                (GaussianRational(-1), seg_lower),
                            ):
                                c2 = coeff * part_coeff * sign
                                if marker[0] == "slot":
                                    s = marker[1]
                                    m2 = list(mono)
                                    m2[s - 1] += part_pow
                                    w2 = list(wave)
                                    if not q.is_zero():
                                        w2[s - 1] = w2[s - 1] + q
                                    new_states.append((c2, phase, m2, w2))
                                else:
                                    v = marker[1]
                                    c2 = c2 * GaussianRational(v**part_pow)
                                    p2 = phase + q * GaussianRational(v)
                                    new_states.append((c2, p2, mono, wave))
                    states = new_states
                for coeff, phase, mono, wave in states:
                    terms_out.append(
                        Term(coeff, tuple(mono), tuple(wave), phase)
                    )
        if terms_out:
            out[alcove] = terms_out
    return PWFunction(out_dim, out)


# -- creation operators --------------------------------------------------------------


def elementary_create(sign: int, mu, indices, f: PWFunction) -> PWFunction:
    """One elementary creation summand: a new coordinate enters through the
    outer slot and the listed coordinates are displaced inward band by band.
    """
    mu = GaussianRational.coerce(mu)
    indices = tuple(indices)
    n_f = f.dimension
    _validate_indices(indices, n_f)
    out_dim = n_f + 1
    static_wave = [GR_ZERO] * out_dim
    moving = []
    if sign == -1:
        anchor = out_dim
        chain = (anchor,) + indices
        assign = {l: l for l in range(1, n_f + 1) if l not in indices}
        for m, im in enumerate(indices):
            upper = ("slot", anchor if m == 0 else indices[m - 1])
            moving.append((im, ("slot", im), upper, -mu))
            static_wave[im - 1] = static_wave[im - 1] + mu
    elif sign == +1:
        anchor = 1
        chain = tuple(i + 1 for i in indices) + (anchor,)
        assign = {l: l + 1 for l in range(1, n_f + 1) if l not in indices}
        n = len(indices)
        for m, im in enumerate(indices):
            lower = ("slot", indices[m + 1] + 1 if m + 1 < n else anchor)
            moving.append((im, lower, ("slot", im + 1), -mu))
            static_wave[im] = static_wave[im] + mu
    else:
        raise ValueError("sign must be +1 or -1")
    static_wave[anchor - 1] = static_wave[anchor - 1] + mu
    return _band_apply(f, out_dim, moving, assign, static_wave, GR_ZERO, chain)


def _validate_indices(indices, limit):
    if len(set(indices)) != len(indices):
        raise ValueError("index tuple entries must be distinct")
    for i in indices:
        if not 1 <= i <= limit:
            raise ValueError(f"index {i} out of range [1, {limit}]")


def create(sign: int, mu, gamma, f: PWFunction) -> PWFunction:
    """Full creation operator: coupling-weighted sum of all elementary
    creation summands over distinct index tuples of every length."""
    gamma = GaussianRational.coerce(gamma)
    n_f = f.dimension
    summands = []
    for n in range(n_f + 1):
        weight = gamma**n
        for indices in weyl.tuples(n, range(1, n_f + 1), increasing=False):
            summands.append(elementary_create(sign, mu, indices, f).scale(weight))
    return PWFunction.sum(n_f + 1, summands)


def a_op(sign: int, mu, gamma, f: PWFunction, xplus, xminus) -> PWFunction:
    """Boundary companion of the creation operator: create, then fix the
    outer slot at the matching box endpoint. Preserves the particle number."""
    return restrict_boundary(sign, create(sign, mu, gamma, f), xplus, xminus)


# -- annihilation operators -----------------------------------------------------------


def elementary_annihilate(
    sign: int, mu, indices, f: PWFunction, xplus, xminus
) -> PWFunction:
    """One elementary annihilation summand: every listed coordinate and one
    outer argument of f are integrated over consecutive bands reaching the
    box endpoints; the output has one coordinate fewer than f."""
    mu = GaussianRational.coerce(mu)
    indices = tuple(indices)
    if f.dimension == 0:
        raise ValueError("annihilation needs at least one coordinate")
    out_dim = f.dimension - 1
    _validate_indices(indices, out_dim)
    xplus, xminus = Fraction(xplus), Fraction(xminus)
    if not xminus > xplus:
        raise ValueError("box endpoints must satisfy xminus > xplus")
    top = ("top", xminus)
    bottom = ("bottom", xplus)
    chain = indices
    n = len(indices)
    static_wave = [GR_ZERO] * out_dim
    for im in indices:
        static_wave[im - 1] = static_wave[im - 1] + mu
    static_phase = mu * GaussianRational(xminus) + mu * GaussianRational(xplus)
    moving = []
    if sign == -1:
        for m, im in enumerate(indices):
            upper = top if m == 0 else ("slot", indices[m - 1])
            moving.append((im + 1, ("slot", im), upper, -mu))
        last_upper = ("slot", indices[-1]) if n else top
        moving.append((1, bottom, last_upper, -mu))
        assign = {l + 1: l for l in range(1, out_dim + 1) if l not in indices}
    elif sign == +1:
        first_lower = ("slot", indices[0]) if n else bottom
        moving.append((f.dimension, first_lower, top, -mu))
        for m, im in enumerate(indices):
            lower = ("slot", indices[m + 1]) if m + 1 < n else bottom
            moving.append((im, lower, ("slot", im), -mu))
        assign = {l: l for l in range(1, out_dim + 1) if l not in indices}
    else:
        raise ValueError("sign must be +1 or -1")
    return _band_apply(f, out_dim, moving, assign, static_wave, static_phase, chain)


def c_op(sign: int, mu, gamma, f: PWFunction, xplus, xminus) -> PWFunction:
    """Full annihilation operator. On the zero-coordinate sector the result
    is the zero function."""
    gamma = GaussianRational.coerce(gamma)
    if f.dimension == 0:
        return zero(0)
    out_dim = f.dimension - 1
    summands = []
    for n in range(out_dim + 1):
        weight = gamma ** (n + 1)
        for indices in weyl.tuples(n, range(1, out_dim + 1), increasing=False):
            summands.append(
                elementary_annihilate(sign, mu, indices, f, xplus, xminus).scale(weight)
            )
    return PWFunction.sum(out_dim, summands)


# -- symmetrizer and monodromy entries -------------------------------------------------


def symmetrize(f: PWFunction) -> PWFunction:
    """Group-average projection onto symmetric functions."""
    n = f.dimension
    total = PWFunction.sum(n, (act_permutation(w, f) for w in _alcoves(n)))
    return total.scale(GaussianRational(Fraction(1, _factorial(n))))


def _factorial(n: int) -> int:
    out = 1
    for t in range(2, n + 1):
        out *= t
    return out


def monodromy_entry(
    which: str, mu, gamma, f: PWFunction, xplus, xminus
) -> PWFunction:
    """Transfer-matrix entry acting on a symmetric function.

    "A"/"D" preserve the particle number (boundary companions through the
    first/last slot), "B" adds a particle (creation then symmetrization),
    "C" removes one (annihilation; both annihilation signs agree on
    symmetric input). Non-symmetric input raises NotSymmetricError.
    """
    if not f.is_symmetric():
        raise NotSymmetricError(f"{which}-entry input must be symmetric")
    if which == "A":
        return a_op(+1, mu, gamma, f, xplus, xminus)
    if which == "D":
        return a_op(-1, mu, gamma, f, xplus, xminus)
    if which == "B":
        return symmetrize(create(-1, mu, gamma, f))
    if which == "C":
        return c_op(-1, mu, gamma, f, xplus, xminus)
    raise ValueError(f"unknown monodromy entry {which!r}")


# -- uniform dispatch --------------------------------------------------------------------


def _p_int(params, key):
    try:
        return int(params[key])
    except KeyError:
        raise ValueError(f"missing operator parameter {key!r}") from None
    except (TypeError, ValueError):
        raise ValueError(f"operator parameter {key!r} must be an integer") from None


def _p_scalar(params, key):
    try:
        return GaussianRational.coerce(params[key])
    except KeyError:
        raise ValueError(f"missing operator parameter {key!r}") from None


def _p_indices(params, key):
    value = params.get(key, ())
    return tuple(int(v) for v in value)


_APPLY_TABLE = {
    "act_permutation": lambda p, f: act_permutation(
        tuple(int(v) for v in p["permutation"]), f
    ),
    "differentiate": lambda p, f: differentiate(_p_int(p, "slot"), f),
    "integrate_direction": lambda p, f: integrate_direction(
        _p_int(p, "upper"), _p_int(p, "lower"), f
    ),
    "dunkl": lambda p, f: dunkl(_p_int(p, "slot"), _p_scalar(p, "gamma"), f),
    "integral_reflection": lambda p, f: integral_reflection(
        _p_int(p, "slot"), _p_scalar(p, "gamma"), f
    ),
    "propagate": lambda p, f: propagate(_p_scalar(p, "gamma"), f),
    "create": lambda p, f: create(
        _p_int(p, "sign"), _p_scalar(p, "mu"), _p_scalar(p, "gamma"), f
    ),
    "elementary_create": lambda p, f: elementary_create(
        _p_int(p, "sign"), _p_scalar(p, "mu"), _p_indices(p, "indices"), f
    ),
    "a": lambda p, f: a_op(
        _p_int(p, "sign"),
        _p_scalar(p, "mu"),
        _p_scalar(p, "gamma"),
        f,
        Fraction(p["xplus"]),
        Fraction(p["xminus"]),
    ),
    "c": lambda p, f: c_op(
        _p_int(p, "sign"),
        _p_scalar(p, "mu"),
        _p_scalar(p, "gamma"),
        f,
        Fraction(p["xplus"]),
        Fraction(p["xminus"]),
    ),
    "elementary_annihilate": lambda p, f: elementary_annihilate(
        _p_int(p, "sign"),
        _p_scalar(p, "mu"),
        _p_indices(p, "indices"),
        f,
        Fraction(p["xplus"]),
        Fraction(p["xminus"]),
    ),
    "restrict_boundary": lambda p, f: restrict_boundary(
        _p_int(p, "sign"), f, Fraction(p["xplus"]), Fraction(p["xminus"])
    ),
    "symmetrize": lambda p, f: symmetrize(f),
    "monodromy": lambda p, f: monodromy_entry(
        str(p["entry"]),
        _p_scalar(p, "mu"),
        _p_scalar(p, "gamma"),
        f,
        Fraction(p["xplus"]),
        Fraction(p["xminus"]),
    ),
    "scale": lambda p, f: f.scale(_p_scalar(p, "scalar")),
}

OPERATOR_NAMES = tuple(sorted(_APPLY_TABLE))


def apply(name: str, params: dict, f: PWFunction) -> PWFunction:
    """Uniform operator dispatch by stable name and string-keyed parameters.

    Scalars are exact rational or Gaussian-rational strings; slots, signs and
    index tuples are integers.
    """
    try:
        handler = _APPLY_TABLE[name]
    except KeyError:
        known = ", ".join(OPERATOR_NAMES)
        raise ValueError(f"unknown operator {name!r}; known operators: {known}") from None
    return handler(dict(params or {}), f)


# -- wavefunctions ----------------------------------------------------------------------


def vacuum() -> PWFunction:
    """The constant 1 on zero coordinates."""
    return PWFunction(0, {(): [Term.make(GR_ONE, (), ())]})


def psi(lam, gamma, method: str = "propagation") -> PWFunction:
    """Non-symmetric wavefunction for the spectral tuple lam, built by one
    of three independent routes:

    - "propagation": propagation operator applied to the plane wave;
    - "b_minus": chain of sign -1 creation operators, first entry first;
    - "b_plus": chain of sign +1 creation operators, last entry first.
    """
    lam = tuple(GaussianRational.coerce(v) for v in lam)
    if method == "propagation":
        return propagate(gamma, plane_wave(lam))
    if method == "b_minus":
        f = vacuum()
        for mu in lam:
            f = create(-1, mu, gamma, f)
        return f
    if method == "b_plus":
        f = vacuum()
        for mu in reversed(lam):
            f = create(+1, mu, gamma, f)
        return f
    raise ValueError(f"unknown method {method!r}")


# -- algebraic expansion of the boundary companions ---------------------------------------


def aba_expand(sign: int, lam, mu, gamma, xplus, xminus) -> dict:
    """Exact expansion of a boundary companion acting on a wavefunction.

    Returns {relabeled spectral tuple: exact scalar coefficient} such that
    applying the sign's boundary companion at spectral value mu to the
    wavefunction of lam equals the coefficient-weighted sum of the
    wavefunctions of the returned tuples. All of mu and the entries of lam
    must be pairwise distinct.
    """
    lam = tuple(GaussianRational.coerce(v) for v in lam)
    mu = GaussianRational.coerce(mu)
    gamma = GaussianRational.coerce(gamma)
    seen = {v.sort_key() for v in lam} | {mu.sort_key()}
    if len(seen) != len(lam) + 1:
        raise DegenerateSpectrumError(
            "expansion requires pairwise distinct spectral values"
        )
    if sign == -1:
        x_end = Fraction(xminus)
    elif sign == +1:
        x_end = Fraction(xplus)
    else:
        raise ValueError("sign must be +1 or -1")
    n_lam = len(lam)
    out = {}
    for n in range(n_lam + 1):
        for indices in weyl.tuples(n, range(1, n_lam + 1), increasing=True):
            coeff = _aba_coeff(sign, lam, indices, mu, gamma, x_end)
            labels = list(lam)
            if sign == -1:
                for m, im in enumerate(indices):
                    labels[im - 1] = (
                        lam[indices[m + 1] - 1] if m + 1 < n else mu
                    )
            else:
                for m, im in enumerate(indices):
                    labels[im - 1] = mu if m == 0 else lam[indices[m - 1] - 1]
            out[tuple(labels)] = coeff
    return out


def _aba_coeff(sign, lam, indices, mu, gamma, x_end) -> PhasedScalar:
    if not lam:
        return PhasedScalar({mu * GaussianRational(x_end): GR_ONE})
    ig = GR_I * gamma
    if sign == -1:
        last = lam[-1]
        d = last - mu
        if d.is_zero():
            raise DegenerateSpectrumError("expansion hit a repeated value")
        if indices and indices[-1] == len(lam):
            inner = _aba_coeff(sign, lam[:-1], indices[:-1], last, gamma, x_end)
            return inner * ((-ig) / d)
        inner = _aba_coeff(sign, lam[:-1], indices, mu, gamma, x_end)
        return inner * ((d + ig) / d)
    first = lam[0]
    d = first - mu
    if d.is_zero():
        raise DegenerateSpectrumError("expansion hit a repeated value")
    if indices and indices[0] == 1:
        shifted = tuple(v - 1 for v in indices[1:])
        inner = _aba_coeff(sign, lam[1:], shifted, first, gamma, x_end)
        return inner * (ig / d)
    shifted = tuple(v - 1 for v in indices)
    inner = _aba_coeff(sign, lam[1:], shifted, mu, gamma, x_end)
    return inner * ((d - ig) / d)
