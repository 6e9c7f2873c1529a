"""
Parabolic modules ``H^{J,a} = H (x)_{H(W_J)} R^a`` for ``a`` in ``{q, -1}``.

``H(W_J)`` acts on ``R^a`` through ``T_x -> a^{l(x)}``. The module has basis
``T^{J,a}_w`` indexed by minimal coset representatives ``w`` in ``W^J``, and
the projection ``phi`` sends ``T_{wx}`` (``w`` in ``W^J``, ``x`` in ``W_J``)
to ``a^{l(x)} T^{J,a}_w``. Bar and ``j`` are computed by lifting a basis
vector to ``H``, applying the involution there and projecting back.

``T_s`` acts on a basis vector in one of three ways:

* ``sw`` in ``W^J`` and longer: ``T^{J,a}_{sw}``
* ``sw`` in ``W^J`` and shorter: ``q T^{J,a}_{sw} + (q - 1) T^{J,a}_w``
* ``sw`` not in ``W^J`` (then ``sw = wt`` with ``t`` in ``J``): ``a T^{J,a}_w``
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping

from . import hecke
from .coxeter import (
    DEFAULT_WJ_CAP,
    CoxeterSystem,
    Element,
    ParabolicData,
    bruhat_interval_below,
    bruhat_leq,
    is_min_coset_rep,
    longest_element_WJ,
    parabolic_decompose,
    parabolic_subgroup_elements,
)
from .errors import (
    NotComparable,
    NotMinCosetRep,
    PostVerificationFailed,
    SystemMismatch,
)
from .hecke import HeckeElement, KLTable, _accumulate, canonical_violations
from .laurent import ONE, ZERO, LaurentPoly, q

__all__ = [
    "ParabolicContext",
    "ParabolicElement",
    "ParabolicKLTable",
    "TJ",
    "phi",
    "lift",
    "ts_action",
    "bar_parabolic",
    "j_parabolic",
    "parabolic_kl_element",
    "parabolic_inverse_kl",
    "dual_violations",
    "compare_P_minus1",
    "compare_P_q",
    "compare_Q",
    "deodhar_remark_identity",
    "pairing_S",
    "pairing_SJ",
]

# cross-check every generator action against lift-multiply-project
CHECK_ACTIONS = bool(os.environ.get("HECKEKL_DEBUG"))


@dataclass(frozen=True)
class ParabolicContext:
    system: CoxeterSystem
    data: ParabolicData

    @classmethod
    def make(cls, system: CoxeterSystem, J, a: str) -> "ParabolicContext":
        for j in J:
            system._check_index(j)
        return cls(system, ParabolicData(frozenset(J), a))

    @property
    def J(self) -> frozenset:
        return self.data.J

    @property
    def a(self) -> str:
        return self.data.a

    @property
    def a_poly(self) -> LaurentPoly:
        return q if self.data.a == "q" else LaurentPoly(-1)

    def dagger(self) -> "ParabolicContext":
        return ParabolicContext(self.system, ParabolicData(self.data.J, self.data.a_dagger))

    def a_power(self, k: int) -> LaurentPoly:
        if self.data.a == "q":
            return LaurentPoly.monomial(k)
        return LaurentPoly(-1 if k % 2 else 1)

    def __repr__(self):
        return f"ParabolicContext(J={sorted(self.J)}, a={self.a})"


class ParabolicElement:
    """A finite combination of ``T^{J,a}_w`` with ``w`` in ``W^J``."""

    __slots__ = ("ctx", "_c")

    def __init__(self, ctx: ParabolicContext, terms: Mapping[Element, LaurentPoly] | None = None):
        self.ctx = ctx
        self._c: dict[Element, LaurentPoly] = {}
        for w, r in (terms or {}).items():
            if not is_min_coset_rep(w, ctx.J):
                raise NotMinCosetRep(f"{w!r} is not a minimal coset representative for J={sorted(ctx.J)}")
            r = LaurentPoly(r) if isinstance(r, int) else r
            if r:
                self._c[w] = r

    @classmethod
    def _raw(cls, ctx, c):
        m = cls.__new__(cls)
        m.ctx = ctx
        m._c = c
        return m

    def items(self):
        return sorted(self._c.items(), key=lambda t: t[0].sort_key())

    def support(self) -> list[Element]:
        return sorted(self._c, key=Element.sort_key)

    def coeff(self, w: Element) -> LaurentPoly:
        return self._c.get(w, ZERO)

    def __len__(self):
        return len(self._c)

    def __eq__(self, other):
        if not isinstance(other, ParabolicElement):
            if other == 0:
                return not self._c
            return NotImplemented
        return self.ctx == other.ctx and self._c == other._c

    __hash__ = None

    def _check(self, other):
        if self.ctx != other.ctx:
            raise SystemMismatch("parabolic elements live in different modules")

    def __add__(self, other):
        if not isinstance(other, ParabolicElement):
            return NotImplemented
        self._check(other)
        c = dict(self._c)
        _accumulate(c, other._c.items())
        return ParabolicElement._raw(self.ctx, c)

    def __neg__(self):
        return ParabolicElement._raw(self.ctx, {w: -r for w, r in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, ParabolicElement):
            return NotImplemented
        return self + (-other)

    def scale(self, r) -> "ParabolicElement":
        if isinstance(r, int):
            r = LaurentPoly(r)
        if not r:
            return ParabolicElement._raw(self.ctx, {})
        return ParabolicElement._raw(self.ctx, {w: c * r for w, c in self._c.items()})

    def __rmul__(self, r):
        if isinstance(r, (int, LaurentPoly)):
            return self.scale(r)
        return NotImplemented

    def __repr__(self):
        if not self._c:
            return "0"
        return " + ".join(f"({r})*TJ[{w}]" for w, r in self.items())


def TJ(w: Element, ctx: ParabolicContext) -> ParabolicElement:
    return ParabolicElement(ctx, {w: ONE})


def phi(h: HeckeElement, ctx: ParabolicContext) -> ParabolicElement:
    """Project ``h`` into ``H^{J,a}``."""
    if h.system != ctx.system:
        raise SystemMismatch("Hecke element and parabolic context use different systems")
    c: dict[Element, LaurentPoly] = {}
    for v, r in h._c.items():
        w, x = parabolic_decompose(v, ctx.J)
        _accumulate(c, [(w, r * ctx.a_power(x.length))])
    return ParabolicElement._raw(ctx, c)


def lift(m: ParabolicElement) -> HeckeElement:
    """The section ``T^{J,a}_w -> T_w``; ``phi(lift(m)) == m``."""
    return HeckeElement._raw(m.ctx.system, dict(m._c))


def ts_action(i: int, m: ParabolicElement) -> ParabolicElement:
    """``T_{s_i} * m``."""
    ctx = m.ctx
    ctx.system._check_index(i)
    c: dict[Element, LaurentPoly] = {}
    for w, r in m._c.items():
        v = w.lmul(i)
        if not is_min_coset_rep(v, ctx.J):
            _accumulate(c, [(w, r * ctx.a_poly)])
        elif v.length > w.length:
            _accumulate(c, [(v, r)])
        else:
            _accumulate(c, [(v, r.shift(1)), (w, r * (q - 1))])
    out = ParabolicElement._raw(ctx, c)
    if CHECK_ACTIONS:
        expected = phi(hecke.mul_T(lift(m), i, "left"), ctx)
        if out != expected:
            raise PostVerificationFailed(f"ts_action({i}) disagrees with lift-multiply-project on {m!r}")
    return out


def bar_parabolic(m: ParabolicElement) -> ParabolicElement:
    ctx = m.ctx
    c: dict[Element, LaurentPoly] = {}
    for w, r in m._c.items():
        _accumulate(c, ((y, s * r.bar()) for y, s in _bar_TJ(w, ctx)._c.items()))
    return ParabolicElement._raw(ctx, c)


_BAR_TJ_CACHE: dict = {}


def _bar_TJ(w: Element, ctx: ParabolicContext) -> ParabolicElement:
    key = (w, ctx)
    m = _BAR_TJ_CACHE.get(key)
    if m is None:
        m = phi(hecke.bar(hecke.T(w)), ctx)
        _BAR_TJ_CACHE[key] = m
    return m


def j_parabolic(m: ParabolicElement) -> ParabolicElement:
    """``j^a``: ``H^{J,a} -> H^{J,a_dagger}``."""
    target = m.ctx.dagger()
    return phi(hecke.j(lift(m)), target)


# -- parabolic canonical basis -------------------------------------------------


class ParabolicKLTable:
    """Grow-only memo of ``C^{J,a}_w``, ``P^{J,a}`` and ``Q^{J,a}`` for one context."""

    def __init__(self, ctx: ParabolicContext):
        self.ctx = ctx
        self.C: dict[Element, ParabolicElement] = {}
        self.P: dict[tuple[Element, Element], LaurentPoly] = {}
        self.Q: dict[tuple[Element, Element], LaurentPoly] = {}

    def _check(self, *els: Element):
        for el in els:
            if el.system != self.ctx.system:
                raise SystemMismatch("element does not belong to the table's system")
            if not is_min_coset_rep(el, self.ctx.J):
                raise NotMinCosetRep(f"{el!r} is not in W^J for J={sorted(self.ctx.J)}")

    def get_P(self, y: Element, w: Element) -> LaurentPoly:
        return parabolic_kl_element(w, self.ctx, self).coeff(y)

    def get_Q(self, y: Element, w: Element) -> LaurentPoly:
        return parabolic_inverse_kl(self, y, w)


def parabolic_kl_element(w: Element, ctx: ParabolicContext, table: ParabolicKLTable) -> ParabolicElement:
    """The parabolic canonical basis element ``C^{J,a}_w`` for ``w`` in ``W^J``.

    Uses ``(T_s + 1) C_{sw}`` for the smallest left descent ``s`` and removes
    the excess top-degree terms with ``mu``-corrections. Besides the usual
    corrections at ``z`` with ``sz < z``, the module with ``a = q`` needs them
    at ``z`` with ``sz`` outside ``W^J``, where ``T_s + 1`` acts by ``q + 1``.
    Every result is checked against the defining conditions.
    """
    if ctx != table.ctx:
        raise ValueError("table belongs to a different parabolic context")
    table._check(w)
    C = table.C.get(w)
    if C is not None:
        return C
    chain = []
    v = w
    while v not in table.C and v.length > 0:
        chain.append(v)
        # the left-descent quotient of an element of W^J stays in W^J
        v = v.lmul(v.word[0])
    if v.length == 0 and v not in table.C:
        _store(table, v, TJ(v, ctx))
    for u in reversed(chain):
        _store(table, u, _parabolic_step(u, table))
    return table.C[w]


def _parabolic_step(w: Element, table: ParabolicKLTable) -> ParabolicElement:
    ctx = table.ctx
    s = w.word[0]
    v = w.lmul(s)
    Cv = table.C[v]
    c = ts_action(s, Cv) + Cv
    lw = w.length
    for z, p in Cv._c.items():
        if z is v:
            continue
        sz = z.lmul(s)
        if sz.length < z.length:
            pass
        elif ctx.a == "q" and not is_min_coset_rep(sz, ctx.J):
            pass
        else:
            continue
        m = hecke._mu_from(p, z.length, v.length)
        if m:
            Cz = parabolic_kl_element(z, ctx, table)
            c = c - Cz.scale(LaurentPoly.monomial((lw - z.length) // 2, m))
    problems = canonical_violations(c, w, bar_parabolic)
    if problems:
        raise PostVerificationFailed(f"C^{{J,{ctx.a}}}_{w!r}: " + "; ".join(problems))
    return c


def _store(table, w, C):
    table.C[w] = C
    for y, p in C._c.items():
        table.P[(y, w)] = p


def interval_WJ(w: Element, J) -> list[Element]:
    """``{y in W^J : y <= w}`` sorted by length then canonical word."""
    return [y for y in bruhat_interval_below(w) if is_min_coset_rep(y, J)]


def parabolic_inverse_kl(table: ParabolicKLTable, y: Element, w: Element) -> LaurentPoly:
    """Inverse parabolic KL polynomial ``Q^{J,a}_{y,w}`` for ``y <= w`` in ``W^J``.

    Computed by unitriangular inversion over ``[y, w]`` restricted to ``W^J``.
    The row is then checked against the dual characterization: the functional
    ``D = sum_v Q_{y,v} S_v`` must satisfy ``bar(D) = q^{l(y)} D`` on every
    ``T^{J,a}_x`` of the interval.
    """
    table._check(y, w)
    key = (y, w)
    if key in table.Q:
        return table.Q[key]
    if not bruhat_leq(y, w):
        raise NotComparable(f"{y!r} is not below {w!r}")
    ctx = table.ctx
    interval = [v for v in interval_WJ(w, ctx.J) if bruhat_leq(y, v)]
    row = hecke._inverse_row(y, interval, lambda v: parabolic_kl_element(v, ctx, table))
    problems = dual_violations(y, row, lambda x: _bar_TJ(x, ctx))
    if problems:
        raise PostVerificationFailed(f"Q^{{J,{ctx.a}}} row at {y!r}: " + "; ".join(problems))
    for v, p in row.items():
        table.Q[(y, v)] = p
    return table.Q[key]


def dual_violations(y: Element, row: Mapping[Element, LaurentPoly], bar_basis) -> list[str]:
    """Check ``bar(D) = q^{l(y)} D`` for ``D = sum_v row[v] S_v``.

    ``S_v`` pairs with the basis as ``<S_v, T_x> = (-1)^{l(v)} delta_{v,x}``
    and the dual bar is ``<bar D, h> = bar <D, bar h>``. Only basis vectors
    ``T_x`` with ``x`` in ``row`` are tested, which is exact because
    ``bar(T_x)`` is supported below ``x``. Also checks the degree bounds.
    """
    problems = []
    ly = y.length
    for x, qx in row.items():
        if x != y:
            if not qx.is_ordinary_polynomial() or 2 * qx.degree() > x.length - ly - 1:
                problems.append(f"Q at {x!r} violates the degree bound: {qx}")
        elif qx != ONE:
            problems.append("diagonal entry is not 1")
        pairing = ZERO
        for v, s in bar_basis(x).items():
            r = row.get(v)
            if r is not None:
                pairing = pairing + r * s * (-1) ** v.length
        lhs = pairing.bar()
        rhs = qx.shift(ly) * (-1) ** x.length
        if lhs != rhs:
            problems.append(f"dual bar condition fails at {x!r}")
    return problems


# -- comparison formulas --------------------------------------------------------


def _check_pair(y: Element, w: Element, J):
    for el in (y, w):
        if not is_min_coset_rep(el, J):
            raise NotMinCosetRep(f"{el!r} is not in W^J for J={sorted(J)}")
    if not bruhat_leq(y, w):
        raise NotComparable(f"{y!r} is not below {w!r}")


def compare_P_minus1(table: KLTable, y: Element, w: Element, J) -> LaurentPoly:
    """``sum_{x in W_J, yx <= w} (-1)^{l(x)} P_{yx,w}``.

    Only ``x`` with ``l(x) <= l(w) - l(y)`` can contribute, so this terminates
    for infinite ``W_J``.
    """
    _check_pair(y, w, J)
    Cw = hecke.kl_element(w, table)
    total = ZERO
    for x in parabolic_subgroup_elements(table.system, J, w.length - y.length):
        yx = y * x
        if bruhat_leq(yx, w):
            p = Cw.coeff(yx)
            total = total + (p if x.length % 2 == 0 else -p)
    return total


def compare_P_q(table: KLTable, y: Element, w: Element, J, cap: int = DEFAULT_WJ_CAP) -> LaurentPoly:
    """``P_{y w_J, w w_J}``; requires a finite ``W_J``."""
    _check_pair(y, w, J)
    wJ = longest_element_WJ(table.system, J, cap)
    return table.get_P(y * wJ, w * wJ)


def compare_Q(table: KLTable, y: Element, w: Element, J, a: str, cap: int = DEFAULT_WJ_CAP) -> LaurentPoly:
    """``Q^{J,a}_{y,w}`` from ordinary inverse KL polynomials.

    For ``a = -1`` this is ``Q_{y,w}``. For ``a = q`` (finite ``W_J``) it is
    ``sum_{x in W_J, y w_J <= w x} (-1)^{l(x) + l(w_J)} Q_{y w_J, w x}``.
    """
    _check_pair(y, w, J)
    if a == "-1":
        return hecke.inverse_kl(table, y, w)
    if a != "q":
        raise ValueError(f"marker must be 'q' or '-1', got {a!r}")
    wJ = longest_element_WJ(table.system, J, cap)
    ywJ = y * wJ
    total = ZERO
    for x in parabolic_subgroup_elements(table.system, J):
        wx = w * x
        if bruhat_leq(ywJ, wx):
            p = hecke.inverse_kl(table, ywJ, wx)
            total = total + (p if (x.length + wJ.length) % 2 == 0 else -p)
    return total


def deodhar_remark_identity(w: Element, ctx: ParabolicContext, table_dagger: ParabolicKLTable | None = None) -> bool:
    """Check ``(-1)^{l(w)} j(C^{J,a'}_w) = sum_y (-q)^{l(w)-l(y)} bar(P^{J,a'}_{y,w}) T^{J,a}_y``.

    Here ``a'`` is the dagger of ``ctx.a`` and ``j`` maps ``H^{J,a'}`` to ``H^{J,a}``.
    """
    if not is_min_coset_rep(w, ctx.J):
        raise NotMinCosetRep(f"{w!r} is not in W^J for J={sorted(ctx.J)}")
    dctx = ctx.dagger()
    if table_dagger is None:
        table_dagger = ParabolicKLTable(dctx)
    Cd = parabolic_kl_element(w, dctx, table_dagger)
    lhs = j_parabolic(Cd).scale((-1) ** w.length)
    rhs_terms = {}
    for y, p in Cd.items():
        k = w.length - y.length
        rhs_terms[y] = p.bar().shift(k) * (-1) ** k
    rhs = ParabolicElement(ctx, rhs_terms)
    return lhs == rhs


def pairing_S(w: Element, h: HeckeElement) -> LaurentPoly:
    """``<S_w, h>``: the signed ``T_w``-coefficient of ``h``."""
    c = h.coeff(w)
    return c if w.length % 2 == 0 else -c


def pairing_SJ(w: Element, m: ParabolicElement) -> LaurentPoly:
    """``<S^{J,a}_w, m>``: the signed ``T^{J,a}_w``-coefficient of ``m``."""
    c = m.coeff(w)
    return c if w.length % 2 == 0 else -c
