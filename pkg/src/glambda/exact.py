"""Exact scalar kernel.

Three scalar instances are used throughout the package:

* ``ExactRational`` -- :class:`fractions.Fraction`;
* :class:`Jet` -- first-order dual numbers ``value + derivative*eps`` over the rationals;
* :class:`LaurentPolynomial` -- sparse multivariate Laurent polynomials with integer
  coefficients, living in a :class:`PolyRing` that fixes the variable order.

All three support ``+ - *`` and ``==`` with each other's integer embeddings, so the
algorithms elsewhere are written once against plain operators.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    DivisionByZero,
    NonMonomialDivisor,
    VariableMismatch,
    ZeroAtNegativeExponent,
)

ExactRational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; floats are rejected."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"not a rational string: {text!r}")
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not a rational string: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise DivisionByZero("zero denominator", where=text)
    return Fraction(int(m.group(1)), den)


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_zero(x) -> bool:
    if isinstance(x, Jet):
        return x.value == 0 and x.derivative == 0
    return x == 0


# ---------------------------------------------------------------------------
# Jets
# ---------------------------------------------------------------------------


class Jet:
    """``value + derivative * eps`` with ``eps**2 == 0``."""

    __slots__ = ("value", "derivative")

    def __init__(self, value=0, derivative=0):
        object.__setattr__(self, "value", Fraction(value))
        object.__setattr__(self, "derivative", Fraction(derivative))

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    @staticmethod
    def _lift(other) -> "Jet":
        if isinstance(other, Jet):
            return other
        if isinstance(other, (int, Fraction)):
            return Jet(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = Jet._lift(other)
        if o is NotImplemented:
            return o
        return Jet(self.value + o.value, self.derivative + o.derivative)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.value, -self.derivative)

    def __sub__(self, other):
        o = Jet._lift(other)
        if o is NotImplemented:
            return o
        return Jet(self.value - o.value, self.derivative - o.derivative)

    def __rsub__(self, other):
        o = Jet._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = Jet._lift(other)
        if o is NotImplemented:
            return o
        return Jet(self.value * o.value, self.value * o.derivative + self.derivative * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Jet._lift(other)
        if o is NotImplemented:
            return o
        if o.value == 0:
            raise DivisionByZero("jet division by a jet with zero value")
        c = o.value
        return Jet(self.value / c, (self.derivative * c - self.value * o.derivative) / (c * c))

    def __rtruediv__(self, other):
        o = Jet._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return Jet(1) / (self ** (-k))
        out = Jet(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = Jet._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.value == o.value and self.derivative == o.derivative

    def __hash__(self):
        return hash((self.value, self.derivative))

    def __bool__(self):
        return not is_zero(self)

    def log_derivative(self) -> Fraction:
        """``derivative / value``: the derivative of ``log``."""
        if self.value == 0:
            raise DivisionByZero("log-derivative of a jet with zero value")
        return self.derivative / self.value

    def __repr__(self):
        return f"Jet({format_rational(self.value)}, {format_rational(self.derivative)})"


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class PolyRing:
    """An ordered set of variable names; polynomials only combine within one ring."""

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.index = {name: k for k, name in enumerate(self.names)}
        self._zero_exp = (0,) * len(self.names)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({list(self.names)!r})"

    def __len__(self):
        return len(self.names)

    def gen(self, name: str) -> "LaurentPolynomial":
        try:
            k = self.index[name]
        except KeyError:
            raise VariableMismatch(f"unknown variable {name!r}") from None
        exp = [0] * len(self.names)
        exp[k] = 1
        return LaurentPolynomial(self, {tuple(exp): 1})

    def const(self, c: int) -> "LaurentPolynomial":
        return LaurentPolynomial(self, {self._zero_exp: c} if c else {})

    def zero(self) -> "LaurentPolynomial":
        return LaurentPolynomial(self, {})

    def one(self) -> "LaurentPolynomial":
        return self.const(1)

    def monomial(self, powers: Mapping[str, int], coeff: int = 1) -> "LaurentPolynomial":
        exp = [0] * len(self.names)
        for name, p in powers.items():
            exp[self.index[name]] += p
        return LaurentPolynomial(self, {tuple(exp): coeff} if coeff else {})


def _as_int(c) -> int:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    raise TypeError(f"Laurent polynomial coefficients must be integers, got {c!r}")


class LaurentPolynomial:
    """Sparse Laurent polynomial with integer coefficients.

    ``terms`` maps exponent tuples (one slot per ring variable, negative allowed)
    to non-zero integers.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, int] | None = None):
        clean = {}
        for exp, c in (terms or {}).items():
            c = _as_int(c)
            if len(exp) != len(ring.names):
                raise VariableMismatch("exponent vector length differs from the ring size")
            if c:
                clean[tuple(exp)] = clean.get(tuple(exp), 0) + c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", {e: c for e, c in clean.items() if c})
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPolynomial is immutable")

    # -- structure --------------------------------------------------------
    def terms(self) -> list[tuple[tuple, int]]:
        """Terms in canonical (lexicographic exponent) order."""
        return sorted(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coefficients(self) -> list[int]:
        return [c for _, c in self.terms()]

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.ring != self.ring:
                raise VariableMismatch("polynomials live in different variable sets")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.const(_as_int(other))
        return NotImplemented

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self._terms)
        for e, c in o._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out: dict[tuple, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPolynomial(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o._terms:
            raise DivisionByZero("division by the zero polynomial")
        if not o.is_monomial():
            raise NonMonomialDivisor("only division by a single term is supported")
        (e2, c2), = o._terms.items()
        out = {}
        for e1, c1 in self._terms.items():
            q, r = divmod(c1, c2)
            if r:
                raise NonMonomialDivisor(f"coefficient {c1} is not divisible by {c2}")
            out[tuple(a - b for a, b in zip(e1, e2))] = q
        return LaurentPolynomial(self.ring, out)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.ring.one() / (self ** (-k))
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if isinstance(other, Fraction) and other.denominator != 1:
                return False
            return self == self.ring.const(int(other))
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring.names, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self._terms)

    # -- evaluation / display --------------------------------------------
    def evaluate(self, assignment: Mapping[str, object]):
        return evaluate(self, assignment)

    def substitute(self, assignment: Mapping[str, "LaurentPolynomial | int"]) -> "LaurentPolynomial":
        """Replace some variables by polynomials of the same ring (monomials if negative powers occur)."""
        out = self.ring.zero()
        for exp, c in self._terms.items():
            term = self.ring.const(c)
            rest = list(exp)
            for name, value in assignment.items():
                k = self.ring.index[name]
                p = exp[k]
                rest[k] = 0
                if p:
                    term = term * (value ** p if isinstance(value, LaurentPolynomial) else
                                   self.ring.const(_as_int(Fraction(value) ** p)))
            out = out + term * LaurentPolynomial(self.ring, {tuple(rest): 1})
        return out

    def __repr__(self):
        return f"LaurentPolynomial({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in sorted(self._terms.items(), reverse=True):
            factors = []
            for name, p in zip(self.ring.names, exp):
                if p == 1:
                    factors.append(name)
                elif p:
                    factors.append(f"{name}^{p}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "variables": list(self.ring.names),
            "terms": [{"coeff": c, "exponents": list(e)} for e, c in self.terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping, ring: PolyRing | None = None) -> "LaurentPolynomial":
        names = tuple(data["variables"])
        if ring is None:
            ring = PolyRing(names)
        elif ring.names != names:
            raise VariableMismatch("serialized variable list differs from the ring")
        return cls(ring, {tuple(t["exponents"]): int(t["coeff"]) for t in data["terms"]})


# ---------------------------------------------------------------------------
# Functional surface
# ---------------------------------------------------------------------------


def ring_ops(x, y, op: str):
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown ring operation {op!r}")


def exact_div(x, y):
    """``x / y`` exactly; raises :class:`DivisionByZero` on a vanishing divisor."""
    if isinstance(y, (int, Fraction)) and not isinstance(y, bool):
        if y == 0:
            raise DivisionByZero()
        if isinstance(x, (int, Fraction)):
            return Fraction(x) / y
    return x / y


def evaluate(p: LaurentPolynomial, assignment: Mapping[str, object]):
    """Substitute rational (or jet) values for every variable of ``p``."""
    names = p.ring.names
    missing = [n for n in names if n not in assignment]
    used = {k for exp in p._terms for k, e in enumerate(exp) if e}
    if any(names[k] in missing for k in used):
        raise VariableMismatch(f"no value for {[names[k] for k in sorted(used) if names[k] in missing]}")
    values = [assignment.get(n, 0) for n in names]
    for k in used:
        if any(exp[k] < 0 for exp in p._terms) and is_zero(values[k]):
            raise ZeroAtNegativeExponent(names[k])
    total = Fraction(0)
    for exp, c in p._terms.items():
        term = Fraction(c)
        for v, e in zip(values, exp):
            if e:
                term = term * (v ** e if e > 0 else Fraction(1) / v ** (-e))
        total = total + term
    return total
