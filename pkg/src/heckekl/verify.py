"""
Independent oracles and runnable identity suites.

The canonical-basis oracle here never uses the mu-recursion: it tabulates
``bar(T_y)`` on the interval below ``w`` and solves the bar-semi-invariance
equations one coefficient at a time, from the top of the interval down. The
degree bound makes each step's solution unique. Inverse polynomials are
checked against a column-wise inversion of the P matrix, which is a
different elimination order from the row-wise one in :mod:`heckekl.hecke`.

All checks use exact equality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import chain

from . import hecke, parabolic
from .coxeter import (
    DEFAULT_WJ_CAP,
    CoxeterSystem,
    Element,
    bruhat_interval_below,
    bruhat_leq,
    elements_up_to_length,
    is_min_coset_rep,
    longest_element_WJ,
    parabolic_subgroup_elements,
)
from .errors import (
    ConfigurationInvalid,
    HeckeKLError,
    NoSolution,
    ParabolicInfinite,
    UnknownSuite,
)
from .hecke import HeckeElement, KLTable
from .laurent import ONE, ZERO, LaurentPoly, q
from .parabolic import ParabolicContext, ParabolicElement, ParabolicKLTable

__all__ = [
    "SuiteConfig",
    "SuiteReport",
    "SUITES",
    "triangular_solve_canonical",
    "brute_force_bruhat",
    "inverse_matrix_oracle",
    "run_suite",
]


def triangular_solve_canonical(w: Element, ctx: ParabolicContext | None = None):
    """Canonical basis element for ``w`` from its defining conditions alone.

    Returns ``(element, column)`` where ``column`` maps each ``y`` in the
    interval to ``P_{y,w}`` (or ``P^{J,a}_{y,w}`` when ``ctx`` is given).

    Writing ``bar(T_x) = sum_y R_{y,x} T_y`` with ``R_{y,y} = q^{-l(y)}``, the
    ``T_y`` coefficient of ``bar(C) = q^{-l(w)} C`` reads

        q^{d} bar(P_y) - P_y = -q^{l(w)} sum_{x > y} bar(P_x) R_{y,x},  d = l(w) - l(y)

    and since ``deg P_y < d/2`` the left side splits into disjoint degree
    ranges, so ``P_y`` is minus the part of the right side below ``d/2``.
    """
    if ctx is None:
        interval = bruhat_interval_below(w)
        bar_basis = hecke._bar_T
    else:
        if not is_min_coset_rep(w, ctx.J):
            raise parabolic.NotMinCosetRep(f"{w!r} is not in W^J")
        interval = parabolic.interval_WJ(w, ctx.J)
        bar_basis = lambda x: parabolic._bar_TJ(x, ctx)  # noqa: E731
    lw = w.length
    column: dict[Element, LaurentPoly] = {}
    acc: dict[Element, LaurentPoly] = {}
    for y in reversed(interval):
        by = bar_basis(y)
        if by.coeff(y) != LaurentPoly.monomial(-y.length):
            raise NoSolution(f"bar(T_{y!r}) has leading coefficient {by.coeff(y)}")
        if y == w:
            p = ONE
        else:
            d = lw - y.length
            rhs = -(acc.get(y, ZERO).shift(lw))
            # terms with 2k < d belong to -P_y, terms with 2k > d to q^d bar(P_y)
            p = -LaurentPoly({k: c for k, c in rhs.terms() if 2 * k < d})
            if rhs != p.bar().shift(d) - p:
                raise NoSolution(f"no polynomial solution at {y!r} for w={w!r}")
        if p:
            column[y] = p
            pb = p.bar()
            for x, r in by.items():
                if x != y:
                    acc[x] = acc.get(x, ZERO) + pb * r
    if ctx is None:
        element = HeckeElement(w.system, column)
    else:
        element = ParabolicElement(ctx, column)
    return element, column


def brute_force_bruhat(y: Element, w: Element) -> bool:
    """``y <= w`` by subword enumeration."""
    return y in set(bruhat_interval_below(w))


def inverse_matrix_oracle(z: Element, interval: list[Element], P) -> dict[Element, LaurentPoly]:
    """Column ``{u: Q_{u,z}}`` from solving ``P X = I`` bottom-up in ``X``.

    ``interval`` lists the elements below ``z`` sorted by length and
    ``P(u, v)`` returns ``P_{u,v}`` (zero off the order).
    """
    x: dict[Element, LaurentPoly] = {}
    for u in reversed(interval):
        if u == z:
            x[u] = ONE
            continue
        acc = ZERO
        for v, xv in x.items():
            if xv:
                acc = acc + P(u, v) * xv
        x[u] = -acc
    return {u: (xu if (z.length - u.length) % 2 == 0 else -xu) for u, xu in x.items()}


# -- suites -----------------------------------------------------------------------


@dataclass
class SuiteConfig:
    system: CoxeterSystem
    label: str = ""
    J: tuple = ()
    a: str | None = None
    max_length: int | None = None
    wj_cap: int = DEFAULT_WJ_CAP

    def markers(self) -> list[str]:
        return [self.a] if self.a else ["q", "-1"]

    def to_json(self) -> dict:
        return {
            "system": self.label or [list(r) for r in self.system.cartan.entries],
            "J": sorted(self.J),
            "a": self.a if self.a else "both",
            "max_length": self.max_length,
        }


@dataclass
class SuiteReport:
    suite: str
    config: dict
    attempted: int = 0
    passed: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.attempted == self.passed

    def record(self, ok: bool, **instance):
        self.attempted += 1
        if ok:
            self.passed += 1
        else:
            self.failures.append(instance)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "attempted": self.attempted,
            "passed": self.passed,
            "ok": self.ok,
            "failures": self.failures,
            "notes": self.notes,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


class _Run:
    """Shared state for one suite run: resolved bounds and memo tables."""

    def __init__(self, name: str, config: SuiteConfig):
        self.config = config
        self.system = config.system
        self.J = frozenset(config.J)
        for jj in self.J:
            if not 0 <= jj < self.system.rank:
                raise ConfigurationInvalid(f"J index {jj} out of range for rank {self.system.rank}")
        L = config.max_length
        if L is None:
            try:
                L = longest_element_WJ(self.system, range(self.system.rank), config.wj_cap).length
            except ParabolicInfinite:
                raise ConfigurationInvalid("W is infinite (or exceeds the cap); give max_length") from None
        self.L = L
        cfg = config.to_json()
        cfg["max_length"] = L
        self.report = SuiteReport(name, cfg)
        self.table = KLTable(self.system)
        self.layers = elements_up_to_length(self.system, L)
        self.elements = list(chain.from_iterable(self.layers))
        self._ptables: dict[str, ParabolicKLTable] = {}

    def ctx(self, a: str) -> ParabolicContext:
        return ParabolicContext.make(self.system, self.J, a)

    def ptable(self, a: str) -> ParabolicKLTable:
        if a not in self._ptables:
            self._ptables[a] = ParabolicKLTable(self.ctx(a))
        return self._ptables[a]

    def coset_reps(self) -> list[Element]:
        return [w for w in self.elements if is_min_coset_rep(w, self.J)]

    def pairs(self):
        for w in self.elements:
            for y in bruhat_interval_below(w):
                yield y, w

    def coset_pairs(self):
        for w in self.coset_reps():
            for y in parabolic.interval_WJ(w, self.J):
                yield y, w

    def wj_finite(self) -> bool:
        try:
            longest_element_WJ(self.system, self.J, self.config.wj_cap)
            return True
        except ParabolicInfinite:
            return False

    def markers_needing_finite_wj(self) -> list[str]:
        markers = self.config.markers()
        if "q" in markers and not self.wj_finite():
            if self.config.a == "q":
                raise ConfigurationInvalid(
                    f"a=q needs a finite W_J, but W_J for J={sorted(self.J)} is infinite"
                )
            self.report.notes.append("a=q skipped: W_J is infinite")
            markers = [m for m in markers if m != "q"]
        return markers


def _w(el: Element) -> str:
    return el.word_str()


def _guard(run: _Run, fn, **instance):
    """Record ``fn()`` as a check; exceptions count as failures."""
    try:
        ok = bool(fn())
        if not ok:
            instance["detail"] = "identity does not hold"
    except HeckeKLError as exc:
        ok = False
        instance["detail"] = f"{type(exc).__name__}: {exc}"
    run.report.record(ok, **instance)


def _suite_hecke_relations(run: _Run):
    e = hecke.T(run.system.identity)
    for i in run.system.generators:
        Ts = hecke.T(run.system.s(i))
        _guard(run, lambda: hecke.multiply(Ts + e, Ts - e.scale(q)) == 0,
               check="quadratic", generator=i)


def _suite_involutions(run: _Run):
    for w in run.elements:
        Tw = hecke.T(w)
        _guard(run, lambda: hecke.bar(hecke.bar(Tw)) == Tw, check="bar-bar", w=_w(w))
        _guard(run, lambda: hecke.j(hecke.j(Tw)) == Tw, check="j-j", w=_w(w))
    for a in run.config.markers():
        ctx = run.ctx(a)
        for w in run.coset_reps():
            m = parabolic.TJ(w, ctx)
            _guard(run, lambda: parabolic.bar_parabolic(parabolic.bar_parabolic(m)) == m,
                   check="bar-bar-parabolic", a=a, w=_w(w))
            _guard(run, lambda: parabolic.j_parabolic(parabolic.j_parabolic(m)) == m,
                   check="j-j-parabolic", a=a, w=_w(w))


def _suite_kl_defining(run: _Run):
    for w in run.elements:
        def check():
            C = hecke.kl_element(w, run.table)
            if hecke.canonical_violations(C, w, hecke.bar):
                return False
            return C == triangular_solve_canonical(w)[0]
        _guard(run, check, check="canonical", w=_w(w))


def _suite_parabolic_defining(run: _Run):
    for a in run.config.markers():
        ctx = run.ctx(a)
        table = run.ptable(a)
        for w in run.coset_reps():
            def check():
                C = parabolic.parabolic_kl_element(w, ctx, table)
                if hecke.canonical_violations(C, w, parabolic.bar_parabolic):
                    return False
                return C == triangular_solve_canonical(w, ctx)[0]
            _guard(run, check, check="canonical", a=a, w=_w(w))


def _inversion_checks(run: _Run, pairs, canonical, get_Q, basis, a=None):
    # canonical(v) -> C_v, get_Q(y, w) -> Q_{y,w}, basis(w) -> T_w
    for y, w in pairs:
        interval = [v for v in (bruhat_interval_below(w) if a is None else parabolic.interval_WJ(w, run.J))
                    if bruhat_leq(y, v)]

        def check():
            total = ZERO
            for v in interval:
                term = get_Q(y, v) * canonical(w).coeff(v)
                total = total + (term if (v.length - y.length) % 2 == 0 else -term)
            if total != (ONE if y == w else ZERO):
                return False
            below = [u for u in (bruhat_interval_below(w) if a is None else parabolic.interval_WJ(w, run.J))]
            oracle = inverse_matrix_oracle(w, below, lambda u, v: canonical(v).coeff(u))
            if oracle.get(y, ZERO) != get_Q(y, w):
                return False
            if y == w:
                rebuilt = None
                for u in below:
                    term = canonical(u).scale(get_Q(u, w) * (-1) ** (w.length - u.length))
                    rebuilt = term if rebuilt is None else rebuilt + term
                return rebuilt == basis(w)
            return True
        inst = {"check": "inversion", "y": _w(y), "w": _w(w)}
        if a is not None:
            inst["a"] = a
        _guard(run, check, **inst)


def _suite_inversion(run: _Run):
    t = run.table
    _inversion_checks(run, run.pairs(), lambda v: hecke.kl_element(v, t),
                      lambda y, w: hecke.inverse_kl(t, y, w), hecke.T)


def _suite_parabolic_inversion(run: _Run):
    for a in run.config.markers():
        ctx = run.ctx(a)
        table = run.ptable(a)
        _inversion_checks(run, run.coset_pairs(),
                          lambda v: parabolic.parabolic_kl_element(v, ctx, table),
                          lambda y, w: parabolic.parabolic_inverse_kl(table, y, w),
                          lambda w: parabolic.TJ(w, ctx), a=a)


def _suite_compare_P(run: _Run):
    for a in run.markers_needing_finite_wj():
        table = run.ptable(a)
        for y, w in run.coset_pairs():
            if a == "-1":
                fn = lambda: parabolic.compare_P_minus1(run.table, y, w, run.J) == table.get_P(y, w)  # noqa: E731
            else:
                fn = lambda: parabolic.compare_P_q(run.table, y, w, run.J, run.config.wj_cap) == table.get_P(y, w)  # noqa: E731
            _guard(run, fn, check="compare-P", a=a, y=_w(y), w=_w(w))


def _suite_compare_Q(run: _Run):
    for a in run.markers_needing_finite_wj():
        table = run.ptable(a)
        for y, w in run.coset_pairs():
            _guard(run, lambda: parabolic.compare_Q(run.table, y, w, run.J, a, run.config.wj_cap)
                   == table.get_Q(y, w), check="compare-Q", a=a, y=_w(y), w=_w(w))


def _suite_remark_j(run: _Run):
    for a in run.config.markers():
        ctx = run.ctx(a)
        dtable = run.ptable(ctx.data.a_dagger)
        for w in run.coset_reps():
            _guard(run, lambda: parabolic.deodhar_remark_identity(w, ctx, dtable),
                   check="remark-j", a=a, w=_w(w))


def _suite_phi_intertwine(run: _Run):
    for a in run.config.markers():
        ctx = run.ctx(a)
        for v in run.elements:
            Tv = hecke.T(v)
            _guard(run, lambda: parabolic.phi(hecke.bar(Tv), ctx) == parabolic.bar_parabolic(parabolic.phi(Tv, ctx)),
                   check="phi-bar", a=a, v=_w(v))
            _guard(run, lambda: parabolic.j_parabolic(parabolic.phi(Tv, ctx)) == parabolic.phi(hecke.j(Tv), ctx.dagger()),
                   check="phi-j", a=a, v=_w(v))
            for i in run.system.generators:
                _guard(run, lambda: parabolic.ts_action(i, parabolic.phi(Tv, ctx))
                       == parabolic.phi(hecke.mul_T(Tv, i, "left"), ctx),
                       check="ts-action", a=a, v=_w(v), generator=i)


def _suite_sja_pairing(run: _Run):
    for a in run.config.markers():
        ctx = run.ctx(a)
        minus_a = -ctx.a_poly
        for z in run.elements:
            Tz = hecke.T(z)
            projected = parabolic.phi(Tz, ctx)
            xs = parabolic_subgroup_elements(run.system, run.J, z.length)

            def check():
                for w in parabolic.interval_WJ(z, run.J):
                    lhs = parabolic.pairing_SJ(w, projected)
                    rhs = ZERO
                    for x in xs:
                        rhs = rhs + minus_a ** x.length * parabolic.pairing_S(w * x, Tz)
                    if lhs != rhs:
                        return False
                return True
            _guard(run, check, check="sja-pairing", a=a, z=_w(z))


def _collect_polys(run: _Run):
    """(label dict, polynomial, is_inverse, lengths) for every table entry in scope."""
    out = []
    t = run.table
    for y, w in run.pairs():
        out.append(({"variant": "P", "y": _w(y), "w": _w(w)}, t.get_P(y, w), y, w))
        out.append(({"variant": "Q", "y": _w(y), "w": _w(w)}, hecke.inverse_kl(t, y, w), y, w))
    for a in run.config.markers():
        table = run.ptable(a)
        for y, w in run.coset_pairs():
            out.append(({"variant": "P-parabolic", "a": a, "y": _w(y), "w": _w(w)}, table.get_P(y, w), y, w))
            out.append(({"variant": "Q-parabolic", "a": a, "y": _w(y), "w": _w(w)}, table.get_Q(y, w), y, w))
    return out


def _suite_positivity(run: _Run):
    for label, p, _, _ in _collect_polys(run):
        run.report.record(all(c >= 0 for c in p.coefficients()), check="positivity",
                          poly=str(p), **label)


def _suite_degree_bounds(run: _Run):
    for label, p, y, w in _collect_polys(run):
        if y == w:
            ok = p == ONE
        else:
            ok = p.is_ordinary_polynomial() and 2 * p.degree() <= w.length - y.length - 1
        run.report.record(ok, check="degree-bound", poly=str(p), **label)


def _suite_bruhat_oracle(run: _Run):
    for w in run.elements:
        for y in run.elements:
            _guard(run, lambda: bruhat_leq(y, w) == brute_force_bruhat(y, w),
                   check="bruhat", y=_w(y), w=_w(w))


SUITES = {
    "hecke-relations": _suite_hecke_relations,
    "involutions": _suite_involutions,
    "kl-defining": _suite_kl_defining,
    "inversion": _suite_inversion,
    "parabolic-defining": _suite_parabolic_defining,
    "parabolic-inversion": _suite_parabolic_inversion,
    "compare-P": _suite_compare_P,
    "compare-Q": _suite_compare_Q,
    "remark-j": _suite_remark_j,
    "phi-intertwine": _suite_phi_intertwine,
    "sja-pairing": _suite_sja_pairing,
    "positivity": _suite_positivity,
    "degree-bounds": _suite_degree_bounds,
    "bruhat-oracle": _suite_bruhat_oracle,
}


def run_suite(name: str, config: SuiteConfig) -> SuiteReport:
    """Run one named property suite and return its report."""
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    run = _Run(name, config)
    SUITES[name](run)
    return run.report
