from fractions import Fraction
from itertools import permutations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dualq.schur import (
    ShapeLaw,
    WeightVector,
    empty_row_prob,
    interlaces,
    schur_eval,
    shape_distribution,
    shape_pmf,
    ssyt_count,
    ssyt_enumerate,
    transition_distribution,
    transition_prob,
)

F = Fraction


def small_partitions(max_boxes=6, max_parts=3):
    out = [()]
    def rec(prefix, last, left):
        for v in range(min(last, left), 0, -1):
            p = prefix + (v,)
            if len(p) <= max_parts:
                out.append(p)
                rec(p, v, left - v)
    rec((), max_boxes, max_boxes)
    return sorted(set(out))


# --- enumeration ----------------------------------------------------------------

def test_ssyt_small_shapes():
    assert len(ssyt_enumerate((1,), 2)) == 2
    twos = {tuple(T.rows[0]) for T in ssyt_enumerate((2,), 2)}
    assert twos == {(1, 1), (1, 2), (2, 2)}
    col = ssyt_enumerate((1, 1), 2)
    assert len(col) == 1 and col[0].rows == [[1], [2]]


def test_ssyt_more_parts_than_letters():
    assert ssyt_enumerate((1, 1, 1), 2) == []


def test_ssyt_all_valid():
    for T in ssyt_enumerate((3, 2), 3):
        assert T.is_valid(alphabet=3)


def test_ssyt_count_matches_enumeration():
    for shape in small_partitions():
        for k in (1, 2, 3, 4):
            assert ssyt_count(shape, k) == len(ssyt_enumerate(shape, k))


def test_ssyt_count_single_row_binomial():
    # stars and bars: weakly increasing words of length m over n letters
    for m in range(6):
        for n in range(1, 5):
            assert ssyt_count((m,), n) == comb(m + n - 1, n - 1)


# --- schur polynomials ------------------------------------------------------------

def test_schur_linear():
    assert schur_eval((1,), [F(1, 3), F(1, 7)]) == F(1, 3) + F(1, 7)


def test_schur_degree_two():
    x1, x2 = F(1, 3), F(1, 7)
    assert schur_eval((2,), [x1, x2]) == x1**2 + x1 * x2 + x2**2
    assert schur_eval((1, 1), [x1, x2]) == x1 * x2


def test_schur_at_ones_counts_tableaux():
    for shape in small_partitions():
        assert schur_eval(shape, [1, 1, 1]) == ssyt_count(shape, 3)


def test_schur_too_many_parts():
    assert schur_eval((1, 1, 1), [0.5, 0.5]) == 0


def test_schur_symmetric_exact():
    xs = [F(1, 2), F(1, 3), F(1, 5)]
    for shape in small_partitions():
        vals = {schur_eval(shape, list(p)) for p in permutations(xs)}
        assert len(vals) == 1


def test_schur_matches_monomial_sum_over_enumeration():
    # independent route: literally add up x^T over the enumerated tableaux
    xs = (F(1, 2), F(2, 3), F(1, 7))
    for shape in small_partitions(max_boxes=5):
        brute = F(0)
        for T in ssyt_enumerate(shape, 3):
            term = F(1)
            for e, xi in zip(T.weight(3), xs):
                term *= xi**e
            brute += term
        assert schur_eval(shape, xs) == brute


# --- shape law ----------------------------------------------------------------------

def test_weight_vector_validation():
    with pytest.raises(ValueError):
        WeightVector((0.3, 1.0))
    with pytest.raises(ValueError):
        WeightVector(())
    assert len(WeightVector((0.3, 0.5))) == 2


def test_empty_shape_mass():
    q = (F(3, 10), F(1, 2))
    assert shape_pmf((), q, 4) == empty_row_prob(q) ** 4


def test_shape_pmf_single_stage_negative_binomial():
    # K=1: the shape is the sum of N zero-inclusive geometrics, so
    # P{(m,)} = C(m+N-1, N-1) (1-q)^N q^m  -- checked by exact convolution
    q = F(2, 5)
    N = 4
    base = {0: 1 - q, 1: (1 - q) * q, 2: (1 - q) * q**2}
    for extra in range(3, 40):
        base[extra] = (1 - q) * q**extra
    conv = {0: F(1)}
    for _ in range(N):
        nxt = {}
        for tot, ptot in conv.items():
            for v, pv in base.items():
                nxt[tot + v] = nxt.get(tot + v, F(0)) + ptot * pv
        conv = nxt
    for m in range(12):
        assert shape_pmf((m,), (q,), N) == conv[m]
        assert shape_pmf((m,), (q,), N) == comb(m + N - 1, N - 1) * (1 - q) ** N * q**m


def test_shape_distribution_normalizes_exactly():
    dist = shape_distribution((F(3, 10), F(1, 2)), 4, residual=1e-10)
    total = sum(dist.values())
    assert 0 <= 1 - total < 1e-10


def test_shape_pmf_symmetric_in_weights():
    q = (F(3, 10), F(1, 2), F(1, 5))
    for shape in [(2,), (2, 1), (3, 1, 1)]:
        vals = {shape_pmf(shape, tuple(p), 3) for p in permutations(q)}
        assert len(vals) == 1


def test_shape_law_wrapper():
    law = ShapeLaw(WeightVector((0.3, 0.5)), 4)
    assert law.pmf(()) == pytest.approx(0.35**4)
    assert abs(sum(law.distribution().values()) - 1) < 1e-9


# --- interlacing and transitions ------------------------------------------------------

def test_interlaces_examples():
    assert interlaces((3, 1), (2, 1))
    assert not interlaces((1,), (2,))
    assert interlaces((2,), ())
    assert not interlaces((2, 2), (1,))  # m_1=1 < l_2=2 breaks the weave
    with pytest.raises(ValueError):
        interlaces((2, 2), (1, 3))


def test_transition_from_empty():
    q = (F(3, 10), F(1, 2))
    assert transition_prob((), (), q) == empty_row_prob(q)


def test_transition_non_interlacing_is_zero():
    assert transition_prob((2,), (1,), (0.3,)) == 0


def test_transition_single_stage_value():
    # a(q) s_(5)/s_(2) = (1-q) q^3
    assert transition_prob((2,), (5,), (F(3, 10),)) == F(7, 10) * F(3, 10) ** 3


def test_transition_distribution_normalizes():
    q = (F(3, 10), F(1, 2))
    for m in [(), (1,), (3, 1), (2, 2)]:
        row = transition_distribution(m, q, residual=1e-10)
        assert 0 <= 1 - sum(row.values()) < 1e-10


def chain_pmf(l, q, N):
    """Independent route: sum transition products over interlacing chains."""
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def rec(shape, n):
        if n == 0:
            return F(1) if shape == () else F(0)
        total = F(0)
        for m in _sub_interlacing(shape):
            p = rec(m, n - 1)
            if p:
                total += p * transition_prob(m, shape, q)
        return total

    def _sub_interlacing(shape):
        from itertools import product as iproduct
        bounds = [(shape[i + 1] if i + 1 < len(shape) else 0, shape[i])
                  for i in range(len(shape))]
        seen = set()
        for tup in iproduct(*[range(lo, hi + 1) for lo, hi in bounds]):
            m = tuple(x for x in tup if x)
            if m not in seen:
                seen.add(m)
                yield m

    return rec(tuple(l), N)


@settings(deadline=None, max_examples=12)
@given(st.sampled_from([(), (1,), (2,), (2, 1), (3, 2), (2, 1, 1), (3, 2, 1)]),
       st.integers(1, 4))
def test_chain_reproduces_shape_law_exactly(l, N):
    q = (F(3, 10), F(1, 2), F(1, 5))
    assert chain_pmf(l, q, N) == shape_pmf(l, q, N)
