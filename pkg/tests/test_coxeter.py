import itertools
import math
import random

import pytest

from heckekl.coxeter import (
    GeneralizedCartanMatrix,
    ParabolicData,
    bruhat_interval_below,
    bruhat_leq,
    build_system,
    cartan_preset,
    elements_up_to_length,
    is_left_descent,
    is_min_coset_rep,
    is_right_descent,
    longest_element_WJ,
    multiply,
    parabolic_decompose,
    parabolic_subgroup_elements,
    simple_reflection,
)
from heckekl.errors import IndexOutOfRange, MalformedCartan, ParabolicInfinite, SystemMismatch

FINITE = ["A2", "A3", "B2", "G2"]


def all_elements(S, L=None):
    if L is None:
        L = longest_element_WJ(S, range(S.rank)).length
    return [w for layer in elements_up_to_length(S, L) for w in layer]


# -- construction -------------------------------------------------------------


@pytest.mark.parametrize("rows, m", [
    ([[2, -1], [-1, 2]], 3),
    ([[2, -2], [-2, 2]], math.inf),
    ([[2, -2], [-1, 2]], 4),
    ([[2, -1], [-3, 2]], 6),
    ([[2, 0], [0, 2]], 2),
    ([[2, -4], [-1, 2]], math.inf),
])
def test_coxeter_exponents(rows, m):
    S = build_system(rows)
    assert S.coxeter_matrix[0][1] == S.coxeter_matrix[1][0] == m
    assert S.coxeter_matrix[0][0] == 1


@pytest.mark.parametrize("rows", [
    [[3, -1], [-1, 2]],
    [[2, 1], [-1, 2]],
    [[2, -1], [0, 2]],
    [[2, -1], [-1]],
])
def test_malformed_cartan(rows):
    with pytest.raises(MalformedCartan):
        build_system(rows)


def test_symmetrizable_flag():
    assert build_system(cartan_preset("G2")).symmetrizable
    assert build_system(cartan_preset("A2~")).symmetrizable
    # ratios around the triangle are inconsistent: d1 = d0/2 but d2 = d0 = d1
    odd = GeneralizedCartanMatrix.from_rows([[2, -1, -1], [-2, 2, -1], [-1, -1, 2]])
    assert not odd.symmetrizable
    assert build_system(odd).rank == 3


@pytest.mark.parametrize("name, rank", [("A4", 4), ("B3", 3), ("C3", 3), ("D4", 4), ("G2", 2), ("A1~", 2), ("A2~", 3)])
def test_presets(name, rank):
    assert build_system(cartan_preset(name)).rank == rank


def test_unknown_preset():
    with pytest.raises(ValueError):
        cartan_preset("E9")
    with pytest.raises(ValueError):
        cartan_preset("G3")


# -- elements ---------------------------------------------------------------------


def test_simple_reflection_matrix(systems):
    A2 = systems["A2"]
    s0 = simple_reflection(A2, 0)
    # columns are images of simple roots: alpha_0 -> -alpha_0, alpha_1 -> alpha_1 + alpha_0
    assert [list(r) for r in s0.matrix] == [[-1, 1], [0, 1]]
    assert s0.length == 1 and s0.word == (0,)
    with pytest.raises(IndexOutOfRange):
        simple_reflection(A2, 2)


@pytest.mark.parametrize("name", FINITE + ["A1~"])
def test_involution_and_identity(systems, name):
    S = systems[name]
    for i in S.generators:
        assert S.s(i) * S.s(i) == S.identity
    assert S.identity.word == () and S.identity.length == 0


def test_multiply_examples(systems):
    A2 = systems["A2"]
    s0, s1 = A2.s(0), A2.s(1)
    assert (s0 * s1).length == 2
    a, b = s0 * s1 * s0, s1 * s0 * s1
    assert a == b and a.word == b.word == (0, 1, 0)
    assert (s0 * s1) * (s1 * s0) == A2.identity
    w = s0 * s1
    assert w * A2.identity == w


def test_system_mismatch(systems):
    with pytest.raises(SystemMismatch):
        multiply(systems["A2"].s(0), systems["B2"].s(0))


def test_descent_examples(systems):
    A2 = systems["A2"]
    w = A2.element([0, 1])
    assert is_right_descent(w, 1) and not is_right_descent(w, 0)
    assert (w * A2.s(1)).length == 1 and (w * A2.s(0)).length == 3
    assert not any(is_right_descent(A2.identity, i) for i in A2.generators)
    assert is_right_descent(A2.s(0), 0)


def _perm_of(word, n):
    # permutation of 0..n-1 for a word in adjacent transpositions (i, i+1)
    p = list(range(n))
    for i in word:
        p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def test_lengths_match_inversion_count_in_S4(systems):
    # independent oracle: for type A, length = number of inversions
    A3 = systems["A3"]
    perms = {}
    for w in all_elements(A3):
        p = _perm_of(w.word, 4)
        inv = sum(1 for i, j in itertools.combinations(range(4), 2) if p[i] > p[j])
        assert w.length == inv
        perms[p] = w
    assert len(perms) == 24


@pytest.mark.parametrize("name", FINITE + ["A1~", "A2~"])
def test_canonical_word_is_shortlex(systems, name):
    S = systems[name]
    for w in all_elements(S, 5 if name.endswith("~") else None):
        assert S.element(w.word) == w
        if w.length:
            assert w.word[0] == min(w.left_descents())
            assert S.element(w.word[1:]).word == w.word[1:]


@pytest.mark.parametrize("name", FINITE + ["A1~", "A2~"])
def test_descents_agree_with_lengths(systems, name):
    S = systems[name]
    for w in all_elements(S, 5 if name.endswith("~") else None):
        for i in S.generators:
            ws = w * S.s(i)
            assert abs(ws.length - w.length) == 1
            assert is_right_descent(w, i) == (ws.length < w.length)
            assert is_left_descent(w, i) == ((S.s(i) * w).length < w.length)


@pytest.mark.parametrize("name", ["A3", "B2", "G2", "A2~"])
def test_associativity_and_identity(systems, name):
    S = systems[name]
    rng = random.Random(7)
    for _ in range(60):
        a, b, c = (S.element([rng.randrange(S.rank) for _ in range(rng.randrange(7))]) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert S.identity * a == a * S.identity == a


def test_inverse(systems):
    for name in ("A3", "G2", "A2~"):
        S = systems[name]
        for w in all_elements(S, 4 if name.endswith("~") else None):
            assert w * w.inverse() == S.identity
            assert w.inverse().length == w.length


# -- Bruhat order ------------------------------------------------------------------


def test_bruhat_examples(systems):
    A2 = systems["A2"]
    s0, s1 = A2.s(0), A2.s(1)
    assert bruhat_leq(A2.identity, s0 * s1)
    assert not bruhat_leq(s0, s1)
    assert bruhat_leq(s0, s1 * s0)


def test_interval_examples(systems):
    A2, A3 = systems["A2"], systems["A3"]
    assert bruhat_interval_below(A2.identity) == [A2.identity]
    iv = bruhat_interval_below(A2.element([0, 1]))
    assert set(iv) == {A2.identity, A2.s(0), A2.s(1), A2.element([0, 1])}
    assert [sum(1 for y in iv if y.length == k) for k in range(3)] == [1, 2, 1]
    w0 = longest_element_WJ(A3, {0, 1, 2})
    assert w0.length == 6
    assert set(bruhat_interval_below(w0)) == set(all_elements(A3))


def _subword_oracle(y, w):
    S = w.system
    for mask in itertools.product([0, 1], repeat=w.length):
        if S.element([i for i, keep in zip(w.word, mask) if keep]) == y:
            return True
    return False


@pytest.mark.parametrize("name, L", [("A3", None), ("B2", None), ("G2", None), ("A1~", 8)])
def test_bruhat_agrees_with_subwords(systems, name, L):
    S = systems[name]
    els = all_elements(S, L)
    for w in els:
        for y in els:
            assert bruhat_leq(y, w) == _subword_oracle(y, w)


@pytest.mark.parametrize("name, L", [("A3", None), ("A1~", 6)])
def test_bruhat_is_partial_order(systems, name, L):
    S = systems[name]
    els = all_elements(S, L)
    leq = {(y, w): bruhat_leq(y, w) for y in els for w in els}
    for y in els:
        assert leq[(y, y)]
    for y, w in itertools.product(els, repeat=2):
        if leq[(y, w)] and leq[(w, y)]:
            assert y.matrix == w.matrix
    rng = random.Random(3)
    for _ in range(3000):
        a, b, c = rng.choice(els), rng.choice(els), rng.choice(els)
        if leq[(a, b)] and leq[(b, c)]:
            assert leq[(a, c)]


# -- enumeration ---------------------------------------------------------------------


def test_layer_sizes(systems):
    assert [len(l) for l in elements_up_to_length(systems["A2"], 3)] == [1, 2, 2, 1]
    assert [len(l) for l in elements_up_to_length(systems["A1~"], 6)] == [1, 2, 2, 2, 2, 2, 2]
    assert elements_up_to_length(systems["A3"], 0) == [[systems["A3"].identity]]
    # S_4 Mahonian numbers
    assert [len(l) for l in elements_up_to_length(systems["A3"], 7)] == [1, 3, 5, 6, 5, 3, 1, 0]


# -- parabolic combinatorics -----------------------------------------------------------


def test_parabolic_decompose_examples(systems):
    A2 = systems["A2"]
    s0, s1 = A2.s(0), A2.s(1)
    assert parabolic_decompose(s1, {1}) == (A2.identity, s1)
    assert parabolic_decompose(s0, {1}) == (s0, A2.identity)
    assert parabolic_decompose(s0 * s1 * s0, {1}) == (s1 * s0, s1)


def test_min_coset_reps(systems):
    A2 = systems["A2"]
    assert is_min_coset_rep(A2.identity, {0, 1})
    assert not is_min_coset_rep(A2.s(1), {1})
    reps = {w for w in all_elements(A2) if is_min_coset_rep(w, {1})}
    assert reps == {A2.identity, A2.s(0), A2.element([1, 0])}


def _subsets(n):
    return [set(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]


@pytest.mark.parametrize("name, L", [("A3", None), ("B2", None), ("G2", None), ("A1~", 7), ("A2~", 5)])
def test_parabolic_decompose_is_bijection(systems, name, L):
    S = systems[name]
    els = all_elements(S, L)
    for J in _subsets(S.rank):
        closure = set(parabolic_subgroup_elements(S, J, max(w.length for w in els)))
        seen = set()
        for w in els:
            u, x = parabolic_decompose(w, J)
            assert u * x == w
            assert is_min_coset_rep(u, J)
            assert x in closure
            assert u.length + x.length == w.length
            seen.add((u, x))
        assert len(seen) == len(els)


def _positive_roots(S, J):
    # independent oracle: orbit of the simple roots in J under W_J
    roots = set()
    frontier = [tuple(int(i == j) for i in range(S.rank)) for j in J]
    roots.update(frontier)
    A = S.cartan.entries
    while frontier:
        nxt = []
        for r in frontier:
            for i in J:
                pairing = sum(A[i][k] * r[k] for k in range(S.rank))
                img = tuple(r[k] - (k == i) * pairing for k in range(S.rank))
                if img not in roots:
                    roots.add(img)
                    nxt.append(img)
        frontier = nxt
    return sum(1 for r in roots if all(c >= 0 for c in r))


def test_longest_element_examples(systems):
    A2 = systems["A2"]
    assert longest_element_WJ(A2, set()) == A2.identity
    w = longest_element_WJ(A2, {0, 1})
    assert w == A2.element([0, 1, 0]) and w.length == 3
    with pytest.raises(ParabolicInfinite):
        longest_element_WJ(systems["A1~"], {0, 1}, cap=1000)
    with pytest.raises(ParabolicInfinite):
        longest_element_WJ(systems["A2~"], {0, 1, 2}, cap=500)


@pytest.mark.parametrize("name", ["A3", "B2", "G2", "A1~", "A2~", "B3", "D4"])
def test_longest_element_properties(name):
    S = build_system(cartan_preset(name))
    for J in _subsets(S.rank):
        try:
            wJ = longest_element_WJ(S, J, cap=2000)
        except ParabolicInfinite:
            assert name.endswith("~") and len(J) == S.rank
            continue
        assert wJ.length == _positive_roots(S, J)
        assert wJ * wJ == S.identity
        assert all(is_right_descent(wJ, j) for j in J)


def test_parabolic_data_dagger():
    assert ParabolicData(frozenset({1}), "q").a_dagger == "-1"
    assert ParabolicData(frozenset(), "-1").a_dagger == "q"
    with pytest.raises(ValueError):
        ParabolicData(frozenset(), "2")


def test_parse_word(systems):
    A3 = systems["A3"]
    assert A3.parse_word("") == A3.identity
    assert A3.parse_word("1,0,2,1").word == (1, 0, 2, 1)
    with pytest.raises(IndexOutOfRange):
        A3.parse_word("3")
