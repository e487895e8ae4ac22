"""Piecewise polynomial-exponential functions on the alcoves of R^N.

A function is stored as a finite map from alcove labels (permutations, see
:mod:`qnls.weyl`) to lists of terms; each term is

    coeff * e^{i*phase} * x^monomial * e^{i <wavevector, x>}

with coeff, phase and wavevector entries in Q(i) and the phase a constant
exponent produced by boundary substitutions. Term lists are kept canonical
(sorted, merged, zero-free), and since exponentials with distinct exact
exponents are linearly independent, canonical equality decides equality of
the represented functions, alcove by alcove.

All operations are exact. The only partial operation is the directional
integral on genuinely discontinuous inputs, whose segment decomposition can
depend on coordinate comparisons no alcove ordering determines; that case
raises AmbiguousPiecewiseIntegralError instead of returning anything wrong.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import AmbiguousPiecewiseIntegralError, OnWallError
from .exact import GR_ONE, GR_ZERO, GaussianRational, PhasedScalar
from . import weyl

__all__ = [
    "Term",
    "PWFunction",
    "plane_wave",
    "constant",
    "zero",
    "from_global_terms",
    "act_permutation",
    "step_multiply",
    "differentiate",
    "integrate_direction",
    "lift",
    "restrict_boundary",
    "substitute_slot",
    "SlotSubstitution",
    "evaluate",
    "evaluate_exact",
    "inner_product",
    "wall_restriction",
    "jump_residual",
]


@lru_cache(maxsize=None)
def _alcoves(n: int) -> tuple:
    return tuple(weyl.all_permutations(n))


@dataclass(frozen=True)
class Term:
    """One exact term coeff * e^{i*phase} * x^monomial * e^{i<wavevector,x>}."""

    coeff: GaussianRational
    monomial: tuple
    wavevector: tuple
    phase: GaussianRational

    @staticmethod
    def make(coeff, monomial, wavevector, phase=GR_ZERO) -> "Term":
        monomial = tuple(int(a) for a in monomial)
        if any(a < 0 for a in monomial):
            raise ValueError("monomial exponents must be nonnegative")
        wavevector = tuple(GaussianRational.coerce(k) for k in wavevector)
        if len(monomial) != len(wavevector):
            raise ValueError("monomial and wavevector lengths differ")
        return Term(
            GaussianRational.coerce(coeff),
            monomial,
            wavevector,
            GaussianRational.coerce(phase),
        )

    def sort_key(self):
        return (
            tuple(k.re for k in self.wavevector),
            tuple(k.im for k in self.wavevector),
            self.monomial,
            self.phase.sort_key(),
        )

    def to_json(self) -> dict:
        return {
            "coeff": self.coeff.to_strings(),
            "monomial": list(self.monomial),
            "wavevector": [k.to_strings() for k in self.wavevector],
            "phases": [] if self.phase.is_zero() else [self.phase.to_strings()],
        }

    @staticmethod
    def from_json(data) -> "Term":
        phase = GR_ZERO
        for part in data.get("phases", []):
            phase = phase + GaussianRational.from_strings(part)
        return Term.make(
            GaussianRational.from_strings(data["coeff"]),
            tuple(data["monomial"]),
            tuple(GaussianRational.from_strings(k) for k in data["wavevector"]),
            phase,
        )


def _merge(terms) -> tuple:
    """Canonical form of a term list: merged, sorted, zero-free."""
    acc = {}
    for t in terms:
        key = (t.wavevector, t.monomial, t.phase)
        prev = acc.get(key)
        acc[key] = t.coeff if prev is None else prev + t.coeff
    out = [
        Term(coeff, key[1], key[0], key[2])
        for key, coeff in acc.items()
        if not coeff.is_zero()
    ]
    out.sort(key=Term.sort_key)
    return tuple(out)


class PWFunction:
    """Alcove-piecewise exact function on R^dimension."""

    __slots__ = ("dimension", "pieces")

    def __init__(self, dimension: int, pieces=None):
        if dimension < 0:
            raise ValueError("dimension must be nonnegative")
        clean = {}
        if pieces:
            for alcove, terms in pieces.items():
                alcove = tuple(alcove)
                if sorted(alcove) != list(range(1, dimension + 1)):
                    raise ValueError(f"bad alcove label {alcove}")
                merged = _merge(terms)
                if merged:
                    clean[alcove] = merged
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "pieces", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PWFunction is immutable")

    def piece(self, alcove) -> tuple:
        return self.pieces.get(tuple(alcove), ())

    def is_zero(self) -> bool:
        return not self.pieces

    def is_smooth(self) -> bool:
        """True when every alcove carries the same global expression."""
        reference = None
        for alcove in _alcoves(self.dimension):
            piece = self.pieces.get(alcove, ())
            if reference is None:
                reference = piece
            elif piece != reference:
                return False
        return True

    def is_symmetric(self) -> bool:
        return all(
            act_permutation(weyl.simple(j, self.dimension), self) == self
            for j in range(1, self.dimension)
        )

    # -- linear structure ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, PWFunction):
            return NotImplemented
        if other.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        merged = {}
        for alcove in set(self.pieces) | set(other.pieces):
            merged[alcove] = self.pieces.get(alcove, ()) + other.pieces.get(alcove, ())
        return PWFunction(self.dimension, merged)

    @staticmethod
    def sum(dimension: int, functions) -> "PWFunction":
        """Sum many functions with a single canonical merge at the end."""
        bucket = {}
        for f in functions:
            if f.dimension != dimension:
                raise ValueError("dimension mismatch")
            for alcove, terms in f.pieces.items():
                bucket.setdefault(alcove, []).extend(terms)
        return PWFunction(dimension, bucket)

    def __neg__(self):
        return self.scale(GaussianRational(-1))

    def __sub__(self, other):
        if not isinstance(other, PWFunction):
            return NotImplemented
        return self + (-other)

    def scale(self, scalar) -> "PWFunction":
        """Multiply by an exact scalar or phased scalar."""
        if isinstance(scalar, PhasedScalar):
            out = {}
            for alcove, terms in self.pieces.items():
                out[alcove] = [
                    Term(t.coeff * c, t.monomial, t.wavevector, t.phase + p)
                    for t in terms
                    for p, c in scalar.terms.items()
                ]
            return PWFunction(self.dimension, out)
        scalar = GaussianRational.coerce(scalar)
        return PWFunction(
            self.dimension,
            {
                alcove: [
                    Term(t.coeff * scalar, t.monomial, t.wavevector, t.phase)
                    for t in terms
                ]
                for alcove, terms in self.pieces.items()
            },
        )

    def __eq__(self, other):
        if not isinstance(other, PWFunction):
            return NotImplemented
        return self.dimension == other.dimension and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.dimension, frozenset(self.pieces.items())))

    def __repr__(self):
        n_terms = sum(len(ts) for ts in self.pieces.values())
        return (
            f"PWFunction(dim={self.dimension}, "
            f"alcoves={len(self.pieces)}, terms={n_terms})"
        )

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        pieces = []
        for alcove in sorted(self.pieces):
            pieces.append(
                {
                    "alcove": list(alcove),
                    "terms": [t.to_json() for t in self.pieces[alcove]],
                }
            )
        return {"dimension": self.dimension, "pieces": pieces}

    @staticmethod
    def from_json(data) -> "PWFunction":
        return PWFunction(
            int(data["dimension"]),
            {
                tuple(entry["alcove"]): [Term.from_json(t) for t in entry["terms"]]
                for entry in data["pieces"]
            },
        )


# -- constructors ---------------------------------------------------------------


def plane_wave(wavevector) -> PWFunction:
    """e^{i<wavevector, x>} as a globally smooth piecewise function."""
    wavevector = tuple(GaussianRational.coerce(k) for k in wavevector)
    n = len(wavevector)
    term = Term.make(GR_ONE, (0,) * n, wavevector)
    return PWFunction(n, {alcove: (term,) for alcove in _alcoves(n)})


def constant(dimension: int, value) -> PWFunction:
    term = Term.make(value, (0,) * dimension, (GR_ZERO,) * dimension)
    return PWFunction(
        dimension, {alcove: (term,) for alcove in _alcoves(dimension)}
    )


def zero(dimension: int) -> PWFunction:
    return PWFunction(dimension, {})


def from_global_terms(dimension: int, terms) -> PWFunction:
    """Smooth function given by one global term list on every alcove."""
    terms = tuple(terms)
    return PWFunction(
        dimension, {alcove: terms for alcove in _alcoves(dimension)}
    )


# -- permutation action and steps ------------------------------------------------


def act_permutation(w, f: PWFunction) -> PWFunction:
    """(w f)(x) = f(w^{-1} x).

    The piece on alcove u is the piece of f on alcove u o w with monomial and
    wavevector permuted by w (slot w(j) receives slot j's data).
    """
    w = tuple(w)
    if len(w) != f.dimension:
        raise ValueError("permutation degree does not match dimension")
    out = {}
    for u in _alcoves(f.dimension):
        source = f.pieces.get(weyl.compose(u, w))
        if source:
            out[u] = [
                Term(
                    t.coeff,
                    weyl.act_tuple(w, t.monomial),
                    weyl.act_tuple(w, t.wavevector),
                    t.phase,
                )
                for t in source
            ]
    return PWFunction(f.dimension, out)


def step_multiply(labels, f: PWFunction) -> PWFunction:
    """Multiply by the indicator of x_{labels[0]} > x_{labels[1]} > ...."""
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise ValueError("step labels must be distinct")
    for l in labels:
        if not 1 <= l <= f.dimension:
            raise ValueError(f"step label {l} out of range")
    out = {}
    for alcove, terms in f.pieces.items():
        if all(
            alcove[labels[m] - 1] < alcove[labels[m + 1] - 1]
            for m in range(len(labels) - 1)
        ):
            out[alcove] = terms
    return PWFunction(f.dimension, out)


def differentiate(j: int, f: PWFunction) -> PWFunction:
    """Partial derivative in slot j, alcove by alcove."""
    if not 1 <= j <= f.dimension:
        raise ValueError(f"slot {j} out of range")
    out = {}
    for alcove, terms in f.pieces.items():
        new_terms = []
        for t in terms:
            a = t.monomial[j - 1]
            if a > 0:
                lowered = list(t.monomial)
                lowered[j - 1] = a - 1
                new_terms.append(
                    Term(t.coeff * a, tuple(lowered), t.wavevector, t.phase)
                )
            k = t.wavevector[j - 1]
            if not k.is_zero():
                new_terms.append(
                    Term(
                        t.coeff * GaussianRational(0, 1) * k,
                        t.monomial,
                        t.wavevector,
                        t.phase,
                    )
                )
        out[alcove] = new_terms
    return PWFunction(f.dimension, out)


# -- one-dimensional exact integration helpers -----------------------------------


def _antiderivative(power: int, q: GaussianRational):
    """Exact antiderivative of y^power * e^{i q y} as [(coeff, power)] parts.

    When q != 0 every part carries the factor e^{i q y}; when q == 0 the
    single part is polynomial. Chosen with zero integration constant for
    q == 0 and the standard integration-by-parts form otherwise (constants
    cancel in definite differences, so the choice is immaterial).
    """
    if q.is_zero():
        return [(GaussianRational(Fraction(1, power + 1)), power + 1)]
    iq = GaussianRational(0, 1) * q
    parts = []
    falling = 1
    for t in range(power + 1):
        coeff = GaussianRational((-1) ** t * falling) / iq ** (t + 1)
        parts.append((coeff, power - t))
        falling *= power - t
    return parts


# -- directional integral ---------------------------------------------------------


def _binomial_pairs(power: int, scale: Fraction):
    """Expansion data of (scale*(A - B))^power: [(coeff, a_pow, b_pow)]."""
    out = []
    for t in range(power + 1):
        coeff = GaussianRational(
            Fraction(math.comb(power, t)) * scale**power * (-1) ** (power - t)
        )
        out.append((coeff, t, power - t))
    return out


def _integrate_piece_terms(segments, j, k):
    """Exact integral sum over y-segments for the moving pair (j, k).

    Along the path slot j carries x_j - y and slot k carries x_k + y; each
    segment contributes antiderivative values at its two breakpoints. A
    breakpoint is one of:
        ("zero",)        y = 0
        ("total",)       y = x_j - x_k
        ("mid",)         y = (x_j - x_k)/2
        ("u", l)         y = x_j - x_l
        ("v", l)         y = x_l - x_k
    """
    out = []
    for terms_piece, lo, hi in segments:
        for t in terms_piece:
            a = t.monomial[j - 1]
            b = t.monomial[k - 1]
            q = t.wavevector[k - 1] - t.wavevector[j - 1]
            for s in range(a + 1):
                for r in range(b + 1):
                    pref = (
                        t.coeff
                        * GaussianRational(
                            math.comb(a, s) * math.comb(b, r) * (-1) ** (a - s)
                        )
                    )
                    # pref * x_j^s * x_k^r * y^{(a-s)+(b-r)} e^{iqy} and the
                    # static exponentials keep the original wavevector.
                    ypow = (a - s) + (b - r)
                    for coeff_part, part_pow in _antiderivative(ypow, q):
                        base_coeff = pref * coeff_part
                        emitted = _eval_breakpoint(
                            t, j, k, s, r, q, base_coeff, part_pow, hi
                        )
                        if emitted is not None:
                            out.extend(emitted)
                        emitted = _eval_breakpoint(
                            t, j, k, s, r, q, -base_coeff, part_pow, lo
                        )
                        if emitted is not None:
                            out.extend(emitted)
    return out


def _eval_breakpoint(t, j, k, s, r, q, coeff, part_pow, bp):
    """Evaluate one antiderivative part at a symbolic breakpoint.

    Returns a list of Terms (an expansion) or None when the value is zero.
    """
    mono = list(t.monomial)
    mono[j - 1] = s
    mono[k - 1] = r
    wave = list(t.wavevector)
    kind = bp[0]
    if kind == "zero":
        if part_pow != 0:
            return None
        return [Term(coeff, tuple(mono), tuple(wave), t.phase)]

    if kind == "total":
        slot_a, slot_b, scale = j, k, Fraction(1)
    elif kind == "mid":
        slot_a, slot_b, scale = j, k, Fraction(1, 2)
    elif kind == "u":
        slot_a, slot_b, scale = j, bp[1], Fraction(1)
    elif kind == "v":
        slot_a, slot_b, scale = bp[1], k, Fraction(1)
    else:  # pragma: no cover - defensive
        raise ValueError(f"unknown breakpoint {bp}")

    if not q.is_zero():
        shift = q * GaussianRational(scale)
        wave[slot_a - 1] = wave[slot_a - 1] + shift
        wave[slot_b - 1] = wave[slot_b - 1] - shift
    terms = []
    for c_bin, a_pow, b_pow in _binomial_pairs(part_pow, scale):
        m2 = list(mono)
        m2[slot_a - 1] += a_pow
        m2[slot_b - 1] += b_pow
        terms.append(Term(coeff * c_bin, tuple(m2), tuple(wave), t.phase))
    return terms


def integrate_direction(j: int, k: int, f: PWFunction) -> PWFunction:
    """Exact (I_{jk} f)(x) = integral_0^{x_j - x_k} f(x - y(e_j - e_k)) dy.

    Smooth inputs integrate globally by the fundamental theorem. Piecewise
    inputs are split at the alcove walls crossed by the path; splits whose
    relative order the output alcove cannot determine are accepted only when
    the input's pieces make them immaterial, otherwise the exact result is
    not piecewise on whole alcoves and AmbiguousPiecewiseIntegralError is
    raised.
    """
    n = f.dimension
    if j == k or not (1 <= j <= n and 1 <= k <= n):
        raise ValueError(f"bad direction pair ({j}, {k})")
    if f.is_zero():
        return zero(n)

    if f.is_smooth():
        reference = next(iter(f.pieces.values()))
        segments = [(reference, ("zero",), ("total",))]
        global_terms = _integrate_piece_terms(segments, j, k)
        return PWFunction(n, {a: tuple(global_terms) for a in _alcoves(n)})

    out = {}
    for alcove in _alcoves(n):
        if alcove[j - 1] < alcove[k - 1]:
            piece = _directional_piece(f, j, k, alcove, +1)
        else:
            piece = _directional_piece(f, k, j, alcove, -1)
        if piece:
            out[alcove] = piece
    return PWFunction(n, out)


def _directional_piece(f, j, k, alcove, orientation):
    """Piece of I (oriented so x_j > x_k on the alcove) times orientation."""
    n = f.dimension
    order = weyl.descending_slots(alcove)
    val = {}
    for rank, slot in enumerate(order, start=1):
        val[slot] = Fraction(3) ** (n - rank)
    vj, vk = val[j], val[k]
    between = [l for l in order if l not in (j, k) and vk < val[l] < vj]

    def lookup(u_value, v_value):
        z = [val[s] for s in range(1, n + 1)]
        z[j - 1] = u_value
        z[k - 1] = v_value
        return f.pieces.get(weyl.alcove_of(z), ())

    material = _material_breakpoints(val, between, lookup, vj, vk)

    families = {bp[0][0] for bp in material}
    if len(families) > 1:
        raise AmbiguousPiecewiseIntegralError(
            f"directional integral ({j},{k}) on alcove {alcove}: breakpoint "
            f"families {sorted(families)} interleave in an order the alcove "
            "does not determine"
        )

    points = sorted(material, key=lambda bp: bp[1])
    bounds = [(("zero",), Fraction(0))] + points + [(("total",), vj - vk)]
    segments = []
    for (lo_spec, lo_val), (hi_spec, hi_val) in zip(bounds, bounds[1:]):
        terms_piece = _segment_piece(lookup, vj, vk, lo_val, hi_val)
        if terms_piece:
            segments.append((terms_piece, lo_spec, hi_spec))

    flat = _integrate_piece_terms(segments, j, k)
    if orientation == -1:
        flat = [
            Term(-t.coeff, t.monomial, t.wavevector, t.phase) for t in flat
        ]
    return _merge(flat)


def _segment_piece(lookup, vj, vk, lo_val, hi_val):
    """Input piece on the open y-segment (lo_val, hi_val).

    Sample points may accidentally hit immaterial walls (where adjacent
    pieces agree, so any nearby regular sample is correct); retry with a
    shrinking offset until the sample is regular.
    """
    length = hi_val - lo_val
    for denom in (2, 3, 5, 7, 11, 13, 17, 19, 23):
        y = lo_val + length / denom
        try:
            return lookup(vj - y, vk + y)
        except OnWallError:
            continue
    raise AssertionError("no regular sample point found in segment")


def _material_breakpoints(val, between, lookup, vj, vk):
    """Candidate path breakpoints whose crossing changes the input expression.

    Each crossing is probed over every placement of the other moving value,
    so a breakpoint kept or dropped here is kept or dropped uniformly over
    the whole output alcove.
    """
    landmarks = sorted([vk] + [val[l] for l in between] + [vj])
    eighth = Fraction(1, 8)
    quarter = Fraction(1, 4)
    positions = []
    for a, b in zip(landmarks, landmarks[1:]):
        positions.append((a + b) / 2)
    for l in between:
        for off in (quarter, eighth, -eighth, -quarter):
            positions.append(val[l] + off)
    positions = sorted(set(p for p in positions if vk < p < vj))

    material = []
    for l in between:
        y_u = vj - val[l]
        hit = False
        for p in positions:
            if p in (val[l] + quarter, val[l] - quarter):
                continue
            if lookup(val[l] + quarter, p) != lookup(val[l] - quarter, p):
                hit = True
                break
        if hit:
            material.append((("u", l), y_u))
    for l in between:
        y_v = val[l] - vk
        hit = False
        for p in positions:
            if p in (val[l] + quarter, val[l] - quarter):
                continue
            if lookup(p, val[l] + quarter) != lookup(p, val[l] - quarter):
                hit = True
                break
        if hit:
            material.append((("v", l), y_v))
    mid_hit = False
    for a, b in zip(landmarks, landmarks[1:]):
        g = (a + b) / 2
        if lookup(g + eighth, g - eighth) != lookup(g - eighth, g + eighth):
            mid_hit = True
            break
    if mid_hit:
        material.append((("mid",), (vj - vk) / 2))
    return material


# -- slot insertion, boundary restriction, substitution ---------------------------


def lift(sign: int, f: PWFunction) -> PWFunction:
    """Embed into one more variable, ignored in the last slot (sign -1) or
    the first slot (sign +1, remaining slots shifted up)."""
    n = f.dimension
    anchor = 1 if sign == +1 else n + 1
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    out = {}
    for big in _alcoves(n + 1):
        order = [s for s in weyl.descending_slots(big) if s != anchor]
        if sign == +1:
            order = [s - 1 for s in order]
        source = f.pieces.get(weyl.alcove_from_order(order))
        if not source:
            continue
        out[big] = [
            Term(
                t.coeff,
                _insert(t.monomial, anchor, 0),
                _insert(t.wavevector, anchor, GR_ZERO),
                t.phase,
            )
            for t in source
        ]
    return PWFunction(n + 1, out)


def _insert(data, slot, filler):
    out = list(data)
    out.insert(slot - 1, filler)
    return tuple(out)


def restrict_boundary(sign: int, f: PWFunction, xplus, xminus) -> PWFunction:
    """Substitute the box endpoint into the outer slot.

    sign +1 fixes slot 1 at the lower endpoint, sign -1 fixes the last slot
    at the upper endpoint; inside the box the fixed value is extremal, which
    selects a unique source alcove per output alcove.
    """
    xplus, xminus = Fraction(xplus), Fraction(xminus)
    if not xminus > xplus:
        raise ValueError("box endpoints must satisfy xminus > xplus")
    n = f.dimension
    if n == 0:
        raise ValueError("cannot restrict a zero-dimensional function")
    if sign == +1:
        anchor, endpoint = 1, xplus
    elif sign == -1:
        anchor, endpoint = n, xminus
    else:
        raise ValueError("sign must be +1 or -1")
    out = {}
    for small in _alcoves(n - 1):
        inner = weyl.descending_slots(small)
        if sign == +1:
            big_order = [s + 1 for s in inner] + [1]
        else:
            big_order = [n] + list(inner)
        source = f.pieces.get(weyl.alcove_from_order(big_order))
        if not source:
            continue
        new_terms = []
        for t in source:
            a = t.monomial[anchor - 1]
            kappa = t.wavevector[anchor - 1]
            coeff = t.coeff * GaussianRational(endpoint**a)
            phase = t.phase + kappa * GaussianRational(endpoint)
            new_terms.append(
                Term(
                    coeff,
                    _delete(t.monomial, anchor),
                    _delete(t.wavevector, anchor),
                    phase,
                )
            )
        out[small] = new_terms
    return PWFunction(n - 1, out)


def _delete(data, slot):
    return tuple(v for s, v in enumerate(data, start=1) if s != slot)


@dataclass(frozen=True)
class SlotSubstitution:
    """Deferred substitution of an exact value into one slot.

    Fixing one coordinate of a piecewise function does not produce a
    piecewise function of the remaining ones (the fixed value's rank among
    them is not determined by their ordering), so the substitution is kept
    as an evaluation handle.
    """

    function: PWFunction
    slot: int
    value: Fraction

    @property
    def dimension(self) -> int:
        return self.function.dimension - 1

    def full_point(self, rest) -> tuple:
        rest = tuple(rest)
        if len(rest) != self.dimension:
            raise ValueError("point dimension mismatch")
        return rest[: self.slot - 1] + (self.value,) + rest[self.slot - 1 :]

    def evaluate_exact(self, rest) -> PhasedScalar:
        return evaluate_exact(self.function, self.full_point(rest))

    def evaluate(self, rest) -> complex:
        return evaluate(self.function, self.full_point(rest))


def substitute_slot(j: int, value, f: PWFunction) -> SlotSubstitution:
    if not 1 <= j <= f.dimension:
        raise ValueError(f"slot {j} out of range")
    return SlotSubstitution(f, j, Fraction(value))


# -- evaluation --------------------------------------------------------------------


def evaluate_exact(f: PWFunction, x) -> PhasedScalar:
    """Exact value at a regular rational point, as a phased scalar."""
    x = tuple(Fraction(v) for v in x)
    if len(x) != f.dimension:
        raise ValueError("point dimension mismatch")
    alcove = weyl.alcove_of(x) if f.dimension else ()
    total = PhasedScalar.zero()
    for t in f.pieces.get(alcove, ()):
        mono = Fraction(1)
        for v, a in zip(x, t.monomial):
            mono *= v**a
        exponent = t.phase
        for v, kappa in zip(x, t.wavevector):
            exponent = exponent + kappa * GaussianRational(v)
        total = total + PhasedScalar({exponent: t.coeff * GaussianRational(mono)})
    return total


def evaluate(f: PWFunction, x) -> complex:
    """Value at a regular point; floats are evaluated in float arithmetic."""
    if all(isinstance(v, (int, Fraction)) for v in x):
        return evaluate_exact(f, x).to_complex()
    pt = [float(v) for v in x]
    alcove = weyl.alcove_of(pt) if f.dimension else ()
    total = 0j
    for t in f.pieces.get(alcove, ()):
        value = t.coeff.to_complex()
        for v, a in zip(pt, t.monomial):
            value *= v**a
        exponent = t.phase.to_complex()
        for v, kappa in zip(pt, t.wavevector):
            exponent += kappa.to_complex() * v
        total += value * _cexp(exponent)
    return total


def _cexp(z: complex) -> complex:
    import cmath

    return cmath.exp(1j * z)


# -- inner product -----------------------------------------------------------------


def inner_product(f: PWFunction, g: PWFunction, xplus, xminus) -> PhasedScalar:
    """Exact <f, g> = integral over the box (xplus, xminus)^N of f * conj(g).

    Computed alcove by alcove as an iterated simplex integral; every
    endpoint substitution stays exact, so the result is a phased scalar.
    """
    if f.dimension != g.dimension:
        raise ValueError("dimension mismatch")
    xplus, xminus = Fraction(xplus), Fraction(xminus)
    if not xminus > xplus:
        raise ValueError("box endpoints must satisfy xminus > xplus")
    n = f.dimension
    total = PhasedScalar.zero()
    for alcove in _alcoves(n):
        tf = f.pieces.get(alcove)
        tg = g.pieces.get(alcove)
        if not tf or not tg:
            continue
        order = weyl.descending_slots(alcove)
        for t1 in tf:
            for t2 in tg:
                coeff = t1.coeff * t2.coeff.conjugate()
                phase = t1.phase - t2.phase.conjugate()
                slot_data = []
                for s in order:
                    power = t1.monomial[s - 1] + t2.monomial[s - 1]
                    q = t1.wavevector[s - 1] - t2.wavevector[s - 1].conjugate()
                    slot_data.append((power, q))
                total = total + _simplex_integral(
                    coeff, phase, slot_data, xplus, xminus
                )
    return total


def _simplex_integral(coeff, phase, slot_data, xplus, xminus) -> PhasedScalar:
    """Integrate prod_r z_r^{a_r} e^{i q_r z_r} over xminus > z_1 > ... > xplus."""
    states = [(coeff, phase, tuple(slot_data))]
    n = len(slot_data)
    for r in range(n - 1, -1, -1):
        next_states = []
        for c, ph, data in states:
            power, q = data[r]
            rest = data[:r]
            for part_coeff, part_pow in _antiderivative(power, q):
                # upper endpoint: previous variable, or xminus for the top one
                if r == 0:
                    upper_c = c * part_coeff * GaussianRational(xminus**part_pow)
                    upper_ph = ph + q * GaussianRational(xminus)
                    next_states.append((upper_c, upper_ph, rest))
                else:
                    p_prev, q_prev = rest[r - 1]
                    lifted = rest[: r - 1] + ((p_prev + part_pow, q_prev + q),)
                    next_states.append((c * part_coeff, ph, lifted))
                # lower endpoint xplus, subtracted
                low_c = -c * part_coeff * GaussianRational(xplus**part_pow)
                low_ph = ph + q * GaussianRational(xplus)
                next_states.append((low_c, low_ph, rest))
        states = next_states
    total = PhasedScalar.zero()
    for c, ph, data in states:
        assert not data
        total = total + PhasedScalar({ph: c})
    return total


# -- wall restrictions and jumps ---------------------------------------------------


def wall_restriction(f: PWFunction, j: int, k: int, side: int) -> PWFunction:
    """One-sided limit of f on the wall x_j = x_k from x_j > x_k (side +1)
    or x_j < x_k (side -1), as a function of the wall coordinates.

    The shared coordinate keeps slot j (wavevector entries add, monomial
    exponents add); slot k is removed and higher slots close ranks.
    """
    n = f.dimension
    if j == k or not (1 <= j <= n and 1 <= k <= n) or n < 2:
        raise ValueError(f"bad wall pair ({j}, {k})")
    out = {}
    for small in _alcoves(n - 1):
        inner = [s if s < k else s + 1 for s in weyl.descending_slots(small)]
        big_order = []
        for s in inner:
            if s == j:
                big_order.extend([j, k] if side == +1 else [k, j])
            else:
                big_order.append(s)
        source = f.pieces.get(weyl.alcove_from_order(big_order))
        if not source:
            continue
        new_terms = []
        for t in source:
            mono = list(t.monomial)
            wave = list(t.wavevector)
            mono[j - 1] += mono[k - 1]
            wave[j - 1] = wave[j - 1] + wave[k - 1]
            new_terms.append(
                Term(
                    t.coeff,
                    _delete(tuple(mono), k),
                    _delete(tuple(wave), k),
                    t.phase,
                )
            )
        out[small] = new_terms
    return PWFunction(n - 1, out)


def jump_residual(f: PWFunction, j: int, k: int, gamma) -> PWFunction:
    """Derivative-jump defect across the wall x_j = x_k.

    Returns [(d_j - d_k)f]_+ - [(d_j - d_k)f]_- - 2*gamma*f(wall) on the
    wall coordinates (wall value taken as the two-sided average, which is
    the wall value itself for continuous inputs). Identically zero exactly
    when the input satisfies the coupling's derivative-jump condition.
    """
    gamma = GaussianRational.coerce(gamma)
    g = differentiate(j, f) - differentiate(k, f)
    plus = wall_restriction(g, j, k, +1)
    minus = wall_restriction(g, j, k, -1)
    avg = (wall_restriction(f, j, k, +1) + wall_restriction(f, j, k, -1)).scale(
        GaussianRational(Fraction(1, 2))
    )
    return plus - minus - avg.scale(gamma * 2)
