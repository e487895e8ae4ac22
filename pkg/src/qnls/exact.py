"""Exact Gaussian-rational arithmetic and exact phased scalars.

The coefficient field is Q(i): complex numbers with rational real and
imaginary parts, held exactly as a pair of ``fractions.Fraction``. On top of
it, :class:`PhasedScalar` represents finite exact sums sum_p c_p * e^{i*phi_p}
with c_p, phi_p in Q(i); distinct exponents give linearly independent
exponentials, so the dictionary form is canonical and equality of phased
scalars is equality of the numbers they denote.

>>> a = GaussianRational.parse("1/2-3/4i")
>>> str(a * a.conjugate())
'13/16'
>>> GaussianRational(1, 1) / GaussianRational(0, 2)
GaussianRational(Fraction(1, 2), Fraction(-1, 2))
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

__all__ = ["GaussianRational", "PhasedScalar", "GR_ZERO", "GR_ONE", "GR_I"]


class GaussianRational:
    """An element of Q(i), canonical by Fraction's reduced form."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value, 0)
        if isinstance(value, str):
            return GaussianRational.parse(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to GaussianRational")

    @staticmethod
    def parse(text: str) -> "GaussianRational":
        """Parse strings like '3', '-2/5', '1+2i', '1/2-3/4i', '1i', '-i'."""

        def _imag(body: str) -> Fraction:
            if body in ("", "+"):
                return Fraction(1)
            if body == "-":
                return Fraction(-1)
            return Fraction(body)

        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian rational literal")
        try:
            if not s.endswith("i"):
                return GaussianRational(Fraction(s), 0)
            split = max(s.rfind("+", 1), s.rfind("-", 1))
            if split == -1:
                return GaussianRational(0, _imag(s[:-1]))
            return GaussianRational(Fraction(s[:split]), _imag(s[split:-1]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad Gaussian rational literal: {text!r}") from exc

    # -- field operations -----------------------------------------------------

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(other.re / norm, -other.im / norm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("exponent must be an integer")
        if exponent < 0:
            return GR_ONE / (self ** (-exponent))
        result = GR_ONE
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- predicates and conversions -------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other, 0)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        # Fraction hashing is costly (modular arithmetic); cache on first use.
        value = self._hash
        if value is None:
            value = hash((self.re, self.im))
            object.__setattr__(self, "_hash", value)
        return value

    def sort_key(self):
        return (self.re, self.im)

    def to_complex(self) -> complex:
        value = complex(self.re, self.im)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise OverflowError("Gaussian rational too large for float conversion")
        return value

    # -- serialization ---------------------------------------------------------

    def to_strings(self) -> list:
        """Canonical 4-tuple of decimal strings [re_num, re_den, im_num, im_den]."""
        return [
            str(self.re.numerator),
            str(self.re.denominator),
            str(self.im.numerator),
            str(self.im.denominator),
        ]

    @staticmethod
    def from_strings(parts) -> "GaussianRational":
        if len(parts) != 4:
            raise ValueError("Gaussian rational JSON must have four components")
        re_num, re_den, im_num, im_den = (int(p) for p in parts)
        return GaussianRational(Fraction(re_num, re_den), Fraction(im_num, im_den))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


GR_ZERO = GaussianRational(0, 0)
GR_ONE = GaussianRational(1, 0)
GR_I = GaussianRational(0, 1)


class PhasedScalar:
    """Exact finite sum of c * e^{i*phi} with c, phi in Q(i).

    Stored as a mapping {phi: c} with zero coefficients dropped; that form is
    canonical, so ``==`` decides equality of the represented numbers.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for phase, coeff in terms.items():
                phase = GaussianRational.coerce(phase)
                coeff = GaussianRational.coerce(coeff)
                if not coeff.is_zero():
                    key = phase
                    if key in clean:
                        total = clean[key] + coeff
                        if total.is_zero():
                            del clean[key]
                        else:
                            clean[key] = total
                    else:
                        clean[key] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PhasedScalar is immutable")

    @staticmethod
    def from_scalar(value) -> "PhasedScalar":
        return PhasedScalar({GR_ZERO: GaussianRational.coerce(value)})

    @staticmethod
    def phase(exponent) -> "PhasedScalar":
        """The unit e^{i*exponent}."""
        return PhasedScalar({GaussianRational.coerce(exponent): GR_ONE})

    @staticmethod
    def zero() -> "PhasedScalar":
        return PhasedScalar({})

    @staticmethod
    def coerce(value) -> "PhasedScalar":
        if isinstance(value, PhasedScalar):
            return value
        return PhasedScalar.from_scalar(GaussianRational.coerce(value))

    def __add__(self, other):
        other = PhasedScalar.coerce(other)
        merged = dict(self.terms)
        for phase, coeff in other.terms.items():
            merged[phase] = merged.get(phase, GR_ZERO) + coeff
        return PhasedScalar(merged)

    __radd__ = __add__

    def __neg__(self):
        return PhasedScalar({p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-PhasedScalar.coerce(other))

    def __rsub__(self, other):
        return PhasedScalar.coerce(other) - self

    def __mul__(self, other):
        other = PhasedScalar.coerce(other)
        product = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                phase = p1 + p2
                product[phase] = product.get(phase, GR_ZERO) + c1 * c2
        return PhasedScalar(product)

    __rmul__ = __mul__

    def conjugate(self) -> "PhasedScalar":
        return PhasedScalar(
            {(-p.conjugate()): c.conjugate() for p, c in self.terms.items()}
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = PhasedScalar.coerce(other)
        if not isinstance(other, PhasedScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_complex(self) -> complex:
        total = 0j
        for phase, coeff in self.terms.items():
            total += coeff.to_complex() * cmath.exp(1j * phase.to_complex())
        return total

    def to_json(self) -> list:
        items = sorted(self.terms.items(), key=lambda pc: pc[0].sort_key())
        return [
            {"phase": p.to_strings(), "coeff": c.to_strings()} for p, c in items
        ]

    @staticmethod
    def from_json(data) -> "PhasedScalar":
        terms = {}
        for entry in data:
            phase = GaussianRational.from_strings(entry["phase"])
            coeff = GaussianRational.from_strings(entry["coeff"])
            terms[phase] = terms.get(phase, GR_ZERO) + coeff
        return PhasedScalar(terms)

    def __repr__(self):
        if not self.terms:
            return "PhasedScalar(0)"
        bits = []
        for p, c in sorted(self.terms.items(), key=lambda pc: pc[0].sort_key()):
            if p.is_zero():
                bits.append(f"({c})")
            else:
                bits.append(f"({c})*e^(i*({p}))")
        return "PhasedScalar(" + " + ".join(bits) + ")"
