"""
The Iwahori-Hecke algebra in the standard basis ``T_w``.

Conventions: ``T_u T_v = T_{uv}`` when lengths add and
``(T_s + 1)(T_s - q) = 0``. The bar involution sends ``q`` to ``q^-1`` and
``T_w`` to ``T_{w^-1}^{-1}``; ``j`` sends ``T_w`` to
``(-q)^{l(w)} T_{w^-1}^{-1}`` and is ``R``-linear.

The canonical basis is normalized without half powers of ``q``:
``C_w = sum_{y <= w} P_{y,w} T_y`` with ``bar(C_w) = q^{-l(w)} C_w``,
``P_{w,w} = 1`` and ``deg P_{y,w} <= (l(w) - l(y) - 1)/2`` for ``y < w``.
With this normalization the usual recursion reads

    (T_s + 1) C_v = C_{sv} + sum_{z < v, sz < z} mu(z, v) q^{(l(sv) - l(z))/2} C_z

for ``sv > v``, and the exponent is always an integer because ``mu(z, v)``
vanishes unless ``l(v) - l(z)`` is odd.
"""

from __future__ import annotations

import functools
from typing import Iterable, Mapping

from .coxeter import CoxeterSystem, Element, bruhat_interval_below, bruhat_leq
from .errors import NotComparable, PostVerificationFailed, SystemMismatch
from .laurent import ONE, ZERO, LaurentPoly, q

__all__ = [
    "HeckeElement",
    "KLTable",
    "T",
    "mul_T",
    "multiply",
    "invert_T",
    "bar",
    "j",
    "kl_element",
    "mu",
    "inverse_kl",
    "canonical_violations",
]

_Q_MINUS_1 = q - 1
_QINV = LaurentPoly.monomial(-1)
_QINV_MINUS_1 = _QINV - 1


class HeckeElement:
    """A finite combination ``sum r_w T_w`` with Laurent polynomial coefficients."""

    __slots__ = ("system", "_c")

    def __init__(self, system: CoxeterSystem, terms: Mapping[Element, LaurentPoly] | None = None):
        self.system = system
        self._c: dict[Element, LaurentPoly] = {}
        if terms:
            for w, r in terms.items():
                if w.system is not system and w.system != system:
                    raise SystemMismatch("basis element from a different system")
                r = LaurentPoly(r) if isinstance(r, int) else r
                if r:
                    self._c[w] = r

    @classmethod
    def _raw(cls, system, c):
        h = cls.__new__(cls)
        h.system = system
        h._c = c
        return h

    def items(self):
        """Terms sorted by (length, canonical word) of the basis element."""
        return sorted(self._c.items(), key=lambda t: t[0].sort_key())

    def support(self) -> list[Element]:
        return sorted(self._c, key=Element.sort_key)

    def coeff(self, w: Element) -> LaurentPoly:
        return self._c.get(w, ZERO)

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            if other == 0:
                return not self._c
            return NotImplemented
        return self.system == other.system and self._c == other._c

    __hash__ = None

    def _check(self, other: "HeckeElement"):
        if other.system is not self.system and other.system != self.system:
            raise SystemMismatch("Hecke elements over different Coxeter systems")

    def __add__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        self._check(other)
        c = dict(self._c)
        _accumulate(c, other._c.items())
        return HeckeElement._raw(self.system, c)

    def __neg__(self):
        return HeckeElement._raw(self.system, {w: -r for w, r in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self + (-other)

    def scale(self, r) -> "HeckeElement":
        if isinstance(r, int):
            r = LaurentPoly(r)
        if not r:
            return HeckeElement._raw(self.system, {})
        return HeckeElement._raw(self.system, {w: c * r for w, c in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return multiply(self, other)
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __repr__(self):
        if not self._c:
            return "0"
        return " + ".join(f"({r})*T[{w}]" for w, r in self.items())


def _accumulate(c: dict, terms: Iterable):
    for w, r in terms:
        s = c.get(w)
        s = r if s is None else s + r
        if s:
            c[w] = s
        else:
            c.pop(w, None)


def T(w: Element) -> HeckeElement:
    return HeckeElement._raw(w.system, {w: ONE})


def identity(system: CoxeterSystem) -> HeckeElement:
    return T(system.identity)


def mul_T(h: HeckeElement, i: int, side: str = "right") -> HeckeElement:
    """Multiply ``h`` by ``T_{s_i}`` on the given side."""
    h.system._check_index(i)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    c: dict[Element, LaurentPoly] = {}
    for w, r in h._c.items():
        if side == "right":
            v = w.rmul(i)
        else:
            v = w.lmul(i)
        if v.length > w.length:
            _accumulate(c, [(v, r)])
        else:
            _accumulate(c, [(v, r.shift(1)), (w, r * _Q_MINUS_1)])
    return HeckeElement._raw(h.system, c)


def multiply(h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
    h1._check(h2)
    c: dict[Element, LaurentPoly] = {}
    for v, r in h2._c.items():
        part = h1
        for i in v.word:
            part = mul_T(part, i, "right")
        _accumulate(c, ((w, s * r) for w, s in part._c.items()))
    return HeckeElement._raw(h1.system, c)


@functools.lru_cache(maxsize=None)
def _bar_T(w: Element) -> HeckeElement:
    # bar(T_w) = T_{w^-1}^{-1} = T_{s_1}^{-1} ... T_{s_k}^{-1} for w = s_1...s_k,
    # with T_s^{-1} = q^-1 T_s + (q^-1 - 1)
    if w.length == 0:
        return T(w)
    i = w.word[-1]
    prev = _bar_T(w.rmul(i))
    a = mul_T(prev, i, "right").scale(_QINV)
    return a + prev.scale(_QINV_MINUS_1)


def invert_T(w: Element) -> HeckeElement:
    """``T_w^{-1}``."""
    return _bar_T(w.inverse())


def bar(h: HeckeElement) -> HeckeElement:
    c: dict[Element, LaurentPoly] = {}
    for w, r in h._c.items():
        rb = r.bar()
        _accumulate(c, ((y, s * rb) for y, s in _bar_T(w)._c.items()))
    return HeckeElement._raw(h.system, c)


def j(h: HeckeElement) -> HeckeElement:
    c: dict[Element, LaurentPoly] = {}
    for w, r in h._c.items():
        rs = r.shift(w.length) * (-1) ** w.length
        _accumulate(c, ((y, s * rs) for y, s in _bar_T(w)._c.items()))
    return HeckeElement._raw(h.system, c)


# -- canonical basis ----------------------------------------------------------


class KLTable:
    """Grow-only memo of canonical basis elements and (inverse) KL polynomials.

    ``C[w]`` holds the canonical basis element, ``P[(y, w)]`` and
    ``Q[(y, w)]`` the polynomials for comparable pairs. One table belongs to
    one Coxeter system.
    """

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self.C: dict[Element, HeckeElement] = {}
        self.P: dict[tuple[Element, Element], LaurentPoly] = {}
        self.Q: dict[tuple[Element, Element], LaurentPoly] = {}

    def _check(self, *els: Element):
        for el in els:
            if el.system is not self.system and el.system != self.system:
                raise SystemMismatch("element does not belong to the table's system")

    def get_P(self, y: Element, w: Element) -> LaurentPoly:
        """``P_{y,w}``, zero when ``y`` is not below ``w``."""
        return kl_element(w, self).coeff(y)

    def get_Q(self, y: Element, w: Element) -> LaurentPoly:
        return inverse_kl(self, y, w)


def canonical_violations(C, w: Element, bar_fn, basis_lengths=None) -> list[str]:
    """List every way ``C`` fails to be the canonical element for ``w``.

    ``C`` may be a Hecke or a parabolic module element; ``bar_fn`` is the
    matching bar involution. An empty list means all defining conditions
    hold: bar-semi-invariance, unitriangularity and the degree bounds.
    """
    problems = []
    lw = w.length
    if C.coeff(w) != ONE:
        problems.append(f"leading coefficient at {w!r} is {C.coeff(w)}, expected 1")
    for y, p in C.items():
        if y == w:
            continue
        if y.length >= lw:
            problems.append(f"term at {y!r} is not strictly shorter than {w!r}")
            continue
        if not p.is_ordinary_polynomial():
            problems.append(f"coefficient at {y!r} has negative exponent: {p}")
        if 2 * p.degree() > lw - y.length - 1:
            problems.append(f"coefficient at {y!r} violates the degree bound: {p}")
    if bar_fn(C) != C.scale(LaurentPoly.monomial(-lw)):
        problems.append("bar(C) != q^{-l(w)} C")
    return problems


def kl_element(w: Element, table: KLTable) -> HeckeElement:
    """The canonical basis element ``C_w``, memoized in ``table``."""
    table._check(w)
    C = table.C.get(w)
    if C is not None:
        return C
    # iterate down a chain of left descents so deep elements do not recurse
    chain = []
    v = w
    while v not in table.C and v.length > 0:
        chain.append(v)
        v = v.lmul(v.word[0])
    if v.length == 0 and v not in table.C:
        _store(table, v, T(v))
    for u in reversed(chain):
        _store(table, u, _kl_step(u, table))
    return table.C[w]


def _kl_step(w: Element, table: KLTable) -> HeckeElement:
    s = w.word[0]
    v = w.lmul(s)
    Cv = table.C[v]
    c = mul_T(Cv, s, "left") + Cv
    lw = w.length
    for z, p in Cv._c.items():
        if z is v or not _neg_column_inv(z, s):
            continue
        m = _mu_from(p, z.length, v.length)
        if m:
            Cz = kl_element(z, table)
            c = c - Cz.scale(LaurentPoly.monomial((lw - z.length) // 2, m))
    problems = canonical_violations(c, w, bar)
    if problems:
        raise PostVerificationFailed(f"C_{w!r}: " + "; ".join(problems))
    return c


def _neg_column_inv(z: Element, s: int) -> bool:
    return any(row[s] < 0 for row in z.inverse_matrix)


def _store(table: KLTable, w: Element, C: HeckeElement):
    table.C[w] = C
    for y, p in C._c.items():
        table.P[(y, w)] = p


def _mu_from(p: LaurentPoly, ly: int, lw: int) -> int:
    gap = lw - ly - 1
    if gap < 0 or gap % 2:
        return 0
    return p.coeff(gap // 2)


def mu(y: Element, w: Element, table: KLTable) -> int:
    """Coefficient of ``q^{(l(w)-l(y)-1)/2}`` in ``P_{y,w}``."""
    table._check(y, w)
    if not bruhat_leq(y, w):
        raise NotComparable(f"{y!r} is not below {w!r}")
    return _mu_from(kl_element(w, table).coeff(y), y.length, w.length)


def inverse_kl(table: KLTable, y: Element, w: Element) -> LaurentPoly:
    """The inverse KL polynomial ``Q_{y,w}`` for ``y <= w``.

    Solves ``sum_{y <= v <= z} (-1)^{l(v)-l(y)} Q_{y,v} P_{v,z} = delta_{y,z}``
    row-wise over the interval ``[y, w]`` and memoizes the whole row.
    """
    table._check(y, w)
    key = (y, w)
    if key in table.Q:
        return table.Q[key]
    if not bruhat_leq(y, w):
        raise NotComparable(f"{y!r} is not below {w!r}")
    interval = [v for v in bruhat_interval_below(w) if bruhat_leq(y, v)]
    row = _inverse_row(y, interval, lambda v: kl_element(v, table))
    for v, p in row.items():
        table.Q[(y, v)] = p
    return table.Q[key]


def _inverse_row(y: Element, interval: list[Element], canonical) -> dict[Element, LaurentPoly]:
    # signed[v] = (-1)^{l(v)-l(y)} Q_{y,v}; interval is sorted by length
    signed: dict[Element, LaurentPoly] = {}
    for v in interval:
        if v == y:
            signed[v] = ONE
            continue
        Cv = canonical(v)
        acc = ZERO
        for u, s in signed.items():
            p = Cv.coeff(u)
            if p:
                acc = acc + s * p
        signed[v] = -acc
    return {v: s if (v.length - y.length) % 2 == 0 else -s for v, s in signed.items()}
