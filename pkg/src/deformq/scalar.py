"""Exact scalar ring used for every coefficient in the exact backend.

A :class:`Scalar` is a finite sum of terms ``(a + b i) * sqrt2**s * h**k * c**l``
with ``a, b`` rational, ``s`` in {0, 1} and ``k, l`` arbitrary integers.
``h`` is the formal square root of ``hbar / 2`` (so ``hbar == 2 h**2`` and
``sqrt(hbar) == sqrt2 * h``) and ``c`` is a formal light-speed symbol.

Values are immutable.  Promotion to a complex float is done explicitly with
:meth:`Scalar.evaluate`; nothing ever converts a float back into a Scalar.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "Scalar",
    "ONE",
    "ZERO",
    "I",
    "SQRT2",
    "H",
    "HBAR",
    "C",
    "as_scalar",
    "is_exact",
    "to_complex",
]

_ZERO_Q = mpq(0)


def _q(x) -> mpq:
    if isinstance(x, mpq):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, (int, Rational)):
        return mpq(x)
    if isinstance(x, str):
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


class Scalar:
    """Element of Q(i)[sqrt2] tensored with Laurent monomials in h and c."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        # terms: {(s, k, l): (re, im)} already normalised by the caller
        self._t = terms if terms is not None else {}
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def rational(cls, x) -> "Scalar":
        q = _q(x)
        if not q:
            return ZERO
        return cls({(0, 0, 0): (q, _ZERO_Q)})

    @classmethod
    def gaussian(cls, re, im=0) -> "Scalar":
        r, i = _q(re), _q(im)
        if not r and not i:
            return ZERO
        return cls({(0, 0, 0): (r, i)})

    @classmethod
    def monomial(cls, re=1, im=0, sqrt2=0, h=0, c=0) -> "Scalar":
        r, i = _q(re), _q(im)
        if not r and not i:
            return ZERO
        s = sqrt2 % 2
        if sqrt2 - s:
            f = mpq(2) ** ((sqrt2 - s) // 2)
            r, i = r * f, i * f
        return cls({(s, h, c): (r, i)})

    # structure --------------------------------------------------------
    def terms(self):
        """Iterate over ``((s, k, l), (re, im))`` pairs in canonical order."""
        return sorted(self._t.items())

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_real(self) -> bool:
        return all(not im for _, im in self._t.values())

    def c_powers(self) -> set[int]:
        return {key[2] for key in self._t}

    def h_powers(self) -> set[int]:
        return {key[1] for key in self._t}

    def filter_c(self, lowest: int) -> "Scalar":
        """Drop every term whose power of c is below ``lowest``."""
        kept = {k: v for k, v in self._t.items() if k[2] >= lowest}
        if len(kept) == len(self._t):
            return self
        return Scalar(kept)

    def c_part(self, power: int) -> "Scalar":
        return Scalar({k: v for k, v in self._t.items() if k[2] == power})

    def h_part(self, power: int) -> "Scalar":
        return Scalar({k: v for k, v in self._t.items() if k[1] == power})

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        out = dict(self._t)
        for k, (r2, i2) in other._t.items():
            v = out.get(k)
            if v is None:
                out[k] = (r2, i2)
            else:
                r, i = v[0] + r2, v[1] + i2
                if r or i:
                    out[k] = (r, i)
                else:
                    del out[k]
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({k: (-r, -i) for k, (r, i) in self._t.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return ZERO
        if len(a) == 1 and len(b) == 1:
            ((s1, k1, l1), (r1, i1)), = a.items()
            ((s2, k2, l2), (r2, i2)), = b.items()
            r, i = r1 * r2 - i1 * i2, r1 * i2 + i1 * r2
            if s1 and s2:
                r, i, s = r * 2, i * 2, 0
            else:
                s = s1 | s2
            return Scalar({(s, k1 + k2, l1 + l2): (r, i)})
        out: dict = {}
        for (s1, k1, l1), (r1, i1) in a.items():
            for (s2, k2, l2), (r2, i2) in b.items():
                r, i = r1 * r2 - i1 * i2, r1 * i2 + i1 * r2
                if s1 and s2:
                    r, i, s = r * 2, i * 2, 0
                else:
                    s = s1 | s2
                key = (s, k1 + k2, l1 + l2)
                v = out.get(key)
                if v is None:
                    out[key] = (r, i)
                else:
                    out[key] = (v[0] + r, v[1] + i)
        return Scalar({k: v for k, v in out.items() if v[0] or v[1]})

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        """Multiplicative inverse.

        Defined when every term carries the same powers of h and c, i.e. the
        value is ``(a + b sqrt2) h**k c**l`` with Gaussian-rational a, b.
        """
        if not self._t:
            raise ZeroDivisionError("division by the zero Scalar")
        hk = {(k, l) for (_, k, l) in self._t}
        if len(hk) != 1:
            raise ArithmeticError(f"{self} is not invertible in the scalar ring")
        (k, l), = hk
        a = self._t.get((0, k, l), (_ZERO_Q, _ZERO_Q))
        b = self._t.get((1, k, l), (_ZERO_Q, _ZERO_Q))
        # 1/(a + b sqrt2) = (a - b sqrt2) / (a^2 - 2 b^2)
        a2 = (a[0] * a[0] - a[1] * a[1], 2 * a[0] * a[1])
        b2 = (b[0] * b[0] - b[1] * b[1], 2 * b[0] * b[1])
        nr, ni = a2[0] - 2 * b2[0], a2[1] - 2 * b2[1]
        den = nr * nr + ni * ni
        inv = (nr / den, -ni / den)
        out = {}
        for s, (x, y) in ((0, a), (1, (-b[0], -b[1]))):
            r, i = x * inv[0] - y * inv[1], x * inv[1] + y * inv[0]
            if r or i:
                out[(s, -k, -l)] = (r, i)
        return Scalar(out)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "Scalar":
        return Scalar({k: (r, -i) for k, (r, i) in self._t.items()})

    conj = conjugate

    @property
    def real(self) -> "Scalar":
        return Scalar({k: (r, _ZERO_Q) for k, (r, i) in self._t.items() if r})

    @property
    def imag(self) -> "Scalar":
        return Scalar({k: (i, _ZERO_Q) for k, (r, i) in self._t.items() if i})

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # conversion -------------------------------------------------------
    def evaluate(self, hbar: float = 1.0, c: float = 1.0) -> complex:
        """Complex value with hbar and c bound to positive numbers."""
        if hbar <= 0 or c <= 0:
            raise ValueError("hbar and c must be positive")
        h = math.sqrt(hbar / 2.0)
        total = 0j
        for (s, k, l), (r, i) in self._t.items():
            # even powers of h go through hbar/2 directly to avoid sqrt rounding
            hk = (hbar / 2.0) ** (k // 2) if k % 2 == 0 else h ** k
            f = (math.sqrt(2.0) if s else 1.0) * hk * c ** l
            total += complex(float(r), float(i)) * f
        return total

    def as_fraction(self) -> Fraction:
        """Rational value of a plain rational Scalar (no i, sqrt2, h or c)."""
        if not self._t:
            return Fraction(0)
        if set(self._t) != {(0, 0, 0)} or self._t[(0, 0, 0)][1]:
            raise ValueError(f"{self} is not a plain rational")
        r = self._t[(0, 0, 0)][0]
        return Fraction(int(r.numerator), int(r.denominator))

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for (s, k, l), (r, i) in self.terms():
            parts.append(f"({r}+{i}i·√2^{s}·h^{k}·c^{l})")
        return " + ".join(parts)

    _TERM = re.compile(
        r"\((-?\d+(?:/\d+)?)\+(-?\d+(?:/\d+)?)i·√2\^(\d)·h\^(-?\d+)·c\^(-?\d+)\)"
    )

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Inverse of ``str``; accepts the canonical serialised form only."""
        text = text.strip()
        if text == "0":
            return ZERO
        total = ZERO
        pos = 0
        for m in cls._TERM.finditer(text):
            gap = text[pos:m.start()].strip()
            if gap not in ("", "+"):
                raise ValueError(f"malformed Scalar text: {text!r}")
            re_, im_, s, k, l = m.groups()
            total = total + cls.monomial(
                Fraction(re_), Fraction(im_), int(s), int(k), int(l)
            )
            pos = m.end()
        if text[pos:].strip():
            raise ValueError(f"malformed Scalar text: {text!r}")
        return total


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, bool):
        return NotImplemented
    if isinstance(x, (int, Fraction, Rational)) or type(x) is type(_ZERO_Q):
        return Scalar.rational(x)
    return NotImplemented


def as_scalar(x) -> Scalar:
    """Coerce ints and rationals to Scalar; Scalars pass through."""
    s = _coerce(x)
    if s is NotImplemented:
        raise TypeError(f"cannot use {type(x).__name__} as an exact Scalar")
    return s


def is_exact(x) -> bool:
    return isinstance(x, Scalar) or (
        isinstance(x, (int, Fraction, Rational)) and not isinstance(x, bool)
    )


def to_complex(x, hbar: float = 1.0, c: float = 1.0) -> complex:
    """Float promotion for either backend's coefficient type."""
    if isinstance(x, Scalar):
        return x.evaluate(hbar, c)
    return complex(x)


ZERO = Scalar()
ONE = Scalar.rational(1)
I = Scalar.gaussian(0, 1)
SQRT2 = Scalar.monomial(1, 0, sqrt2=1)
H = Scalar.monomial(1, 0, h=1)
HBAR = Scalar.monomial(2, 0, h=2)
C = Scalar.monomial(1, 0, c=1)
