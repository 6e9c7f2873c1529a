"""
Exact Laurent polynomials in one variable ``q`` with integer coefficients.

Coefficients are Python ints, so nothing ever overflows. A polynomial is
stored as a dict ``{exponent: coefficient}`` with no zero entries, which makes
the stored form canonical: equal polynomials have equal dicts.

>>> from heckekl.laurent import q, LaurentPoly
>>> (1 + q) * (1 - q)
1 - q^2
>>> (1 + q).bar()
q^-1 + 1
>>> LaurentPoly.from_json({"min": 0, "coeffs": [1, 1]})
1 + q
"""

from __future__ import annotations

import math
from typing import Iterator, Mapping

__all__ = ["LaurentPoly", "q", "ZERO", "ONE"]


class LaurentPoly:
    __slots__ = ("_c", "_hash")

    def __init__(self, terms: Mapping[int, int] | int | None = None):
        if terms is None:
            self._c: dict[int, int] = {}
        elif isinstance(terms, int):
            self._c = {0: terms} if terms else {}
        else:
            self._c = {int(k): int(v) for k, v in terms.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> "LaurentPoly":
        # caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "LaurentPoly":
        return cls._raw({k: c} if c else {})

    @classmethod
    def from_coeffs(cls, lo: int, coeffs) -> "LaurentPoly":
        return cls({lo + i: c for i, c in enumerate(coeffs)})

    # -- structural queries ------------------------------------------------

    def terms(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs in increasing exponent order."""
        return sorted(self._c.items())

    def coeff(self, k: int) -> int:
        return self._c.get(k, 0)

    def degree(self):
        """Top exponent; ``-inf`` for the zero polynomial."""
        return max(self._c) if self._c else -math.inf

    def min_degree(self):
        """Bottom exponent; ``+inf`` for the zero polynomial."""
        return min(self._c) if self._c else math.inf

    def is_ordinary_polynomial(self) -> bool:
        return self.min_degree() >= 0

    def is_zero(self) -> bool:
        return not self._c

    def coefficients(self) -> Iterator[int]:
        return iter(self._c.values())

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                del c[k]
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._raw({k: v * other for k, v in self._c.items()})
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if len(other._c) == 1:
            (e, v), = other._c.items()
            return LaurentPoly._raw({k + e: c * v for k, c in self._c.items()})
        c: dict[int, int] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                c[k] = c.get(k, 0) + v1 * v2
        return LaurentPoly._raw({k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1 or next(iter(self._c.values())) not in (1, -1):
                raise ValueError("only units can be raised to negative powers")
            (e, v), = self._c.items()
            return LaurentPoly._raw({e * n: 1 if n % 2 == 0 else v})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q**k``."""
        if not k:
            return self
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def bar(self) -> "LaurentPoly":
        """The ring involution ``q -> q^-1``."""
        return LaurentPoly._raw({-k: v for k, v in self._c.items()})

    def truncate(self, lo=None, hi=None) -> "LaurentPoly":
        """Keep only the terms with ``lo <= exponent <= hi``."""
        return LaurentPoly._raw({
            k: v for k, v in self._c.items()
            if (lo is None or k >= lo) and (hi is None or k <= hi)
        })

    def __call__(self, x):
        return sum(v * x ** k for k, v in self._c.items())

    # -- comparison, hashing, display ----------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        if not self._c:
            return "0"
        out = []
        for k, v in self.terms():
            if k == 0:
                mono = str(abs(v))
            else:
                var = "q" if k == 1 else f"q^{k}"
                mono = var if abs(v) == 1 else f"{abs(v)}*{var}"
            if not out:
                out.append(mono if v > 0 else "-" + mono)
            else:
                out.append(("+ " if v > 0 else "- ") + mono)
        return " ".join(out)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        if not self._c:
            return {"min": 0, "coeffs": []}
        lo, hi = min(self._c), max(self._c)
        return {"min": lo, "coeffs": [self._c.get(k, 0) for k in range(lo, hi + 1)]}

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        coeffs = list(data["coeffs"])
        if coeffs and (coeffs[0] == 0 or coeffs[-1] == 0):
            raise ValueError(f"non-canonical serialized polynomial: {data!r}")
        return cls.from_coeffs(int(data["min"]), coeffs)


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly(x)
    return NotImplemented


ZERO = LaurentPoly()
ONE = LaurentPoly(1)
q = LaurentPoly.monomial(1)
