"""
Weyl groups of generalized Cartan matrices.

Elements are represented by integer matrices in the reflection
representation on simple-root coordinates: the simple reflection ``s_i``
sends ``alpha_j`` to ``alpha_j - a_ij alpha_i``. Column ``k`` of the matrix of
``w`` holds the coordinates of ``w(alpha_k)``. Matrix equality is element
equality, so no normal-form theory is needed; the canonical (ShortLex) reduced
word is derived from the matrix by repeatedly stripping the smallest left
descent.

Each :class:`CoxeterSystem` interns its elements, so two equal elements
built in the same system are the same Python object.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    IndexOutOfRange,
    MalformedCartan,
    ParabolicInfinite,
    SystemMismatch,
)

__all__ = [
    "GeneralizedCartanMatrix",
    "CoxeterSystem",
    "Element",
    "ParabolicData",
    "build_system",
    "cartan_preset",
    "simple_reflection",
    "multiply",
    "is_right_descent",
    "is_left_descent",
    "bruhat_leq",
    "bruhat_interval_below",
    "elements_up_to_length",
    "parabolic_decompose",
    "is_min_coset_rep",
    "longest_element_WJ",
    "parabolic_subgroup_elements",
    "DEFAULT_WJ_CAP",
]

DEFAULT_WJ_CAP = 100_000

Matrix = tuple[tuple[int, ...], ...]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    cols = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(a[r], cols[c])) for c in range(n))
        for r in range(n)
    )


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(r == c) for c in range(n)) for r in range(n))


@dataclass(frozen=True)
class GeneralizedCartanMatrix:
    entries: tuple[tuple[int, ...], ...]
    symmetrizable: bool = field(init=False)

    def __post_init__(self):
        rows = self.entries
        n = len(rows)
        if n == 0:
            raise MalformedCartan("Cartan matrix must have positive rank")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise MalformedCartan(f"row {i} has {len(row)} entries, expected {n}")
            for j, a in enumerate(row):
                if not isinstance(a, int) or isinstance(a, bool):
                    raise MalformedCartan(f"entry ({i},{j}) = {a!r} is not an integer")
        for i in range(n):
            if rows[i][i] != 2:
                raise MalformedCartan(f"diagonal entry ({i},{i}) is {rows[i][i]}, expected 2")
            for j in range(n):
                if i == j:
                    continue
                if rows[i][j] > 0:
                    raise MalformedCartan(f"off-diagonal entry ({i},{j}) = {rows[i][j]} is positive")
                if (rows[i][j] == 0) != (rows[j][i] == 0):
                    raise MalformedCartan(
                        f"entries ({i},{j}) = {rows[i][j]} and ({j},{i}) = {rows[j][i]} "
                        "violate the symmetric zero pattern"
                    )
        object.__setattr__(self, "symmetrizable", _is_symmetrizable(rows))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "GeneralizedCartanMatrix":
        try:
            return cls(tuple(tuple(r) for r in rows))
        except TypeError as exc:
            raise MalformedCartan(f"Cartan matrix must be a list of integer rows: {exc}") from None

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def _is_symmetrizable(a) -> bool:
    # propagate d_j = d_i * a_ij / a_ji over each connected component
    n = len(a)
    d: list[Fraction | None] = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or a[i][j] == 0:
                    continue
                dj = d[i] * a[i][j] / a[j][i]
                if d[j] is None:
                    d[j] = dj
                    stack.append(j)
                elif d[j] != dj:
                    return False
    return True


_M_TABLE = {0: 2, 1: 3, 2: 4, 3: 6}


def coxeter_m(aij: int, aji: int):
    """Coxeter exponent m_ij for an off-diagonal Cartan pair; ``math.inf`` for >= 4."""
    return _M_TABLE.get(aij * aji, math.inf)


class CoxeterSystem:
    """The Weyl group of a generalized Cartan matrix, with element interning."""

    def __init__(self, cartan: GeneralizedCartanMatrix):
        self.cartan = cartan
        self.rank = n = cartan.rank
        self.symmetrizable = cartan.symmetrizable
        a = cartan.entries
        self.coxeter_matrix = tuple(
            tuple(1 if i == j else coxeter_m(a[i][j], a[j][i]) for j in range(n))
            for i in range(n)
        )
        self._refl: list[Matrix] = [
            tuple(
                tuple((r == c) - (r == i) * a[i][c] for c in range(n))
                for r in range(n)
            )
            for i in range(n)
        ]
        self._elements: dict[Matrix, Element] = {}
        self._wj_cache: dict = {}
        ident = _identity(n)
        self.identity = self._intern(ident, ident)

    @property
    def generators(self) -> range:
        return range(self.rank)

    def __repr__(self):
        return f"CoxeterSystem({[list(r) for r in self.cartan.entries]})"

    def __eq__(self, other):
        return isinstance(other, CoxeterSystem) and self.cartan == other.cartan

    def __hash__(self):
        return hash(self.cartan)

    def _check_index(self, i: int):
        if not (0 <= i < self.rank):
            raise IndexOutOfRange(f"generator index {i} out of range for rank {self.rank}")

    def _intern(self, matrix: Matrix, inverse: Matrix) -> "Element":
        el = self._elements.get(matrix)
        if el is None:
            el = Element(self, matrix, inverse)
            self._elements[matrix] = el
        return el

    def s(self, i: int) -> "Element":
        self._check_index(i)
        return self.identity.rmul(i)

    def element(self, word: Sequence[int]) -> "Element":
        """The product of simple reflections along ``word`` (need not be reduced)."""
        w = self.identity
        for i in word:
            self._check_index(i)
            w = w.rmul(i)
        return w

    def parse_word(self, text: str) -> "Element":
        text = text.strip()
        if not text or text == "e":
            return self.identity
        try:
            word = [int(tok) for tok in text.split(",")]
        except ValueError:
            raise ValueError(f"cannot parse word {text!r}; expected comma-separated indices") from None
        return self.element(word)


class Element:
    """An element of a Weyl group; immutable, hashed by its matrix."""

    __slots__ = ("system", "matrix", "inverse_matrix", "word", "length",
                 "_right", "_left", "_inv", "__weakref__")

    def __init__(self, system: CoxeterSystem, matrix: Matrix, inverse: Matrix):
        self.system = system
        self.matrix = matrix
        self.inverse_matrix = inverse
        self.word = _canonical_word(system, inverse)
        self.length = len(self.word)
        self._right: dict[int, Element] = {}
        self._left: dict[int, Element] = {}
        self._inv = None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Element):
            return NotImplemented
        return self.matrix == other.matrix and self.system == other.system

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        if not self.word:
            return "e"
        return "*".join(f"s{i}" for i in self.word)

    def word_str(self) -> str:
        return ",".join(map(str, self.word))

    def sort_key(self):
        return (self.length, self.word)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __mul__(self, other):
        return multiply(self, other)

    def rmul(self, i: int) -> "Element":
        """``w * s_i``."""
        el = self._right.get(i)
        if el is None:
            sysm = self.system
            sysm._check_index(i)
            r = sysm._refl[i]
            el = sysm._intern(_matmul(self.matrix, r), _matmul(r, self.inverse_matrix))
            self._right[i] = el
            el._right[i] = self
        return el

    def lmul(self, i: int) -> "Element":
        """``s_i * w``."""
        el = self._left.get(i)
        if el is None:
            sysm = self.system
            sysm._check_index(i)
            r = sysm._refl[i]
            el = sysm._intern(_matmul(r, self.matrix), _matmul(self.inverse_matrix, r))
            self._left[i] = el
            el._left[i] = self
        return el

    def inverse(self) -> "Element":
        if self._inv is None:
            self._inv = self.system._intern(self.inverse_matrix, self.matrix)
            self._inv._inv = self
        return self._inv

    def right_descents(self) -> list[int]:
        return [i for i in range(self.system.rank) if _neg_column(self.matrix, i)]

    def left_descents(self) -> list[int]:
        return [i for i in range(self.system.rank) if _neg_column(self.inverse_matrix, i)]


def _neg_column(m: Matrix, i: int) -> bool:
    # roots are sign-coherent, so one negative coordinate decides
    return any(row[i] < 0 for row in m)


def _canonical_word(system: CoxeterSystem, inverse: Matrix) -> tuple[int, ...]:
    # strip the smallest left descent until the identity is reached;
    # s_i w has inverse w^-1 s_i
    word = []
    n = system.rank
    inv = inverse
    while True:
        for i in range(n):
            if _neg_column(inv, i):
                word.append(i)
                inv = _matmul(inv, system._refl[i])
                break
        else:
            return tuple(word)


@dataclass(frozen=True)
class ParabolicData:
    """A subset J of generators together with the character marker ``a``.

    ``a`` is the string ``"q"`` or ``"-1"``; ``a_dagger`` is the other one,
    so that ``a * a_dagger = -q``.
    """

    J: frozenset
    a: str

    def __post_init__(self):
        if self.a not in ("q", "-1"):
            raise ValueError(f"marker must be 'q' or '-1', got {self.a!r}")
        object.__setattr__(self, "J", frozenset(self.J))

    @property
    def a_dagger(self) -> str:
        return "-1" if self.a == "q" else "q"


# -- operations ---------------------------------------------------------------


def build_system(cartan: GeneralizedCartanMatrix | Sequence[Sequence[int]]) -> CoxeterSystem:
    if not isinstance(cartan, GeneralizedCartanMatrix):
        cartan = GeneralizedCartanMatrix.from_rows(cartan)
    return CoxeterSystem(cartan)


def simple_reflection(system: CoxeterSystem, i: int) -> Element:
    return system.s(i)


def _same_system(*els: Element):
    first = els[0].system
    for el in els[1:]:
        if el.system is not first and el.system != first:
            raise SystemMismatch("elements belong to different Coxeter systems")


def multiply(w: Element, v: Element) -> Element:
    _same_system(w, v)
    sysm = w.system
    return sysm._intern(_matmul(w.matrix, v.matrix), _matmul(v.inverse_matrix, w.inverse_matrix))


def is_right_descent(w: Element, i: int) -> bool:
    w.system._check_index(i)
    return _neg_column(w.matrix, i)


def is_left_descent(w: Element, i: int) -> bool:
    w.system._check_index(i)
    return _neg_column(w.inverse_matrix, i)


def bruhat_leq(y: Element, w: Element) -> bool:
    """Decide ``y <= w`` in the Bruhat order.

    Uses the lifting property along the canonical word of ``w``: for a left
    descent ``s`` of ``w``, ``y <= w`` iff ``sy <= sw`` when ``s`` is a left
    descent of ``y``, and iff ``y <= sw`` otherwise.
    """
    _same_system(y, w)
    while True:
        if y.length >= w.length:
            return y == w
        if y.length == 0:
            return True
        s = w.word[0]
        if _neg_column(y.inverse_matrix, s):
            y = y.lmul(s)
        w = w.lmul(s)


def bruhat_interval_below(w: Element) -> list[Element]:
    """All ``y <= w``, sorted by length then canonical word.

    Built as the set of products of subwords of the canonical word of ``w``.
    """
    found = {w.system.identity}
    for i in w.word:
        found |= {v.rmul(i) for v in found}
    return sorted(found, key=Element.sort_key)


def elements_up_to_length(system: CoxeterSystem, L: int) -> list[list[Element]]:
    layers = [[system.identity]]
    seen = {system.identity}
    for _ in range(L):
        nxt = []
        for v in layers[-1]:
            for i in system.generators:
                if _neg_column(v.matrix, i):
                    continue
                u = v.rmul(i)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        nxt.sort(key=Element.sort_key)
        layers.append(nxt)
    return layers


def _normalize_J(system: CoxeterSystem, J) -> frozenset:
    J = frozenset(J)
    for j in J:
        system._check_index(j)
    return J


@functools.lru_cache(maxsize=None)
def _decompose(w: Element, J: frozenset) -> tuple[Element, Element]:
    u = w
    x_word: list[int] = []
    while True:
        for j in sorted(J):
            if _neg_column(u.matrix, j):
                u = u.rmul(j)
                x_word.append(j)
                break
        else:
            break
    return u, w.system.element(reversed(x_word))


def parabolic_decompose(w: Element, J) -> tuple[Element, Element]:
    """Split ``w = u * x`` with ``u`` in W^J and ``x`` in W_J, lengths adding."""
    return _decompose(w, _normalize_J(w.system, J))


def is_min_coset_rep(w: Element, J) -> bool:
    return not any(_neg_column(w.matrix, j) for j in J)


def _wj_search(system: CoxeterSystem, J: frozenset, cap: int):
    # BFS on raw matrices; a finite W_J is detected by an element having
    # every j in J as a right descent, which is then w_J
    if not J:
        return system.identity
    layer = [(system.identity.matrix, system.identity.inverse_matrix)]
    seen = {layer[0][0]}
    while layer:
        nxt = []
        for m, minv in layer:
            if all(_neg_column(m, j) for j in J):
                return system._intern(m, minv)
            for j in J:
                if _neg_column(m, j):
                    continue
                r = system._refl[j]
                m2 = _matmul(m, r)
                if m2 not in seen:
                    seen.add(m2)
                    if len(seen) > cap:
                        return None
                    nxt.append((m2, _matmul(r, minv)))
        layer = nxt
    raise AssertionError("parabolic BFS ran out of elements without a longest element")


def longest_element_WJ(system: CoxeterSystem, J, cap: int = DEFAULT_WJ_CAP) -> Element:
    """The longest element of the parabolic subgroup generated by ``J``.

    Raises :class:`ParabolicInfinite` if the subgroup has more than ``cap``
    elements (in particular when it is infinite).
    """
    J = _normalize_J(system, J)
    key = (J, cap)
    if key not in system._wj_cache:
        system._wj_cache[key] = _wj_search(system, J, cap)
    w = system._wj_cache[key]
    if w is None:
        raise ParabolicInfinite(
            f"W_J for J={sorted(J)} exceeded {cap} elements without closing"
        )
    return w


def parabolic_subgroup_elements(system: CoxeterSystem, J, max_length: int | None = None) -> list[Element]:
    """Elements of W_J of length at most ``max_length`` (all of W_J if None).

    With ``max_length=None`` the subgroup must be finite; this is checked
    with :func:`longest_element_WJ` first.
    """
    J = _normalize_J(system, J)
    if max_length is None:
        max_length = longest_element_WJ(system, J).length
    layer = [system.identity]
    out = [system.identity]
    seen = {system.identity}
    for _ in range(max_length):
        nxt = []
        for v in layer:
            for j in sorted(J):
                if _neg_column(v.matrix, j):
                    continue
                u = v.rmul(j)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        if not nxt:
            break
        nxt.sort(key=Element.sort_key)
        out.extend(nxt)
        layer = nxt
    return out


# -- presets ------------------------------------------------------------------

_PRESET_RE = re.compile(r"^([ABCDG])(\d+)(~?)$")


def cartan_preset(name: str) -> GeneralizedCartanMatrix:
    """Standard Cartan matrices: An, Bn, Cn, Dn, G2 and the affine A1~, A2~."""
    m = _PRESET_RE.match(name.strip())
    if not m:
        raise ValueError(f"unknown preset {name!r}")
    kind, n, affine = m.group(1), int(m.group(2)), bool(m.group(3))
    if affine:
        if kind == "A" and n == 1:
            return GeneralizedCartanMatrix.from_rows([[2, -2], [-2, 2]])
        if kind == "A" and n >= 2:
            k = n + 1
            rows = [[0] * k for _ in range(k)]
            for i in range(k):
                rows[i][i] = 2
                rows[i][(i + 1) % k] = -1
                rows[i][(i - 1) % k] = -1
            return GeneralizedCartanMatrix.from_rows(rows)
        raise ValueError(f"unknown preset {name!r}")
    if n < 1:
        raise ValueError(f"unknown preset {name!r}")
    rows = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    if kind == "A":
        pass
    elif kind in ("B", "C") and n >= 2:
        if n == 2:
            rows = [[2, -2], [-1, 2]]
        else:
            # B_n: the last simple root is short
            rows[n - 1][n - 2] = -2
        if kind == "C":
            rows = [list(col) for col in zip(*rows)]
    elif kind == "D" and n >= 4:
        rows[n - 1][n - 2] = rows[n - 2][n - 1] = 0
        rows[n - 1][n - 3] = rows[n - 3][n - 1] = -1
    elif kind == "G" and n == 2:
        rows = [[2, -1], [-3, 2]]
    else:
        raise ValueError(f"unknown preset {name!r}")
    return GeneralizedCartanMatrix.from_rows(rows)
