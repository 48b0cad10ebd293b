"""Partitions, semistandard tableau enumeration, Schur polynomials, and the
law of the insertion shape under geometric entries.

With independent entries u(i, j) ~ (1-q_j) q_j^k on {0, 1, ...}, the shape
of the insertion tableau of an N x K matrix is distributed as

    P{shape = l} = prod_j (1-q_j)^N  *  s_l(q_1..q_K)  *  #SSYT(l over N letters),

and the shape sequence in N is a Markov chain whose transitions multiply
a(q) s_l(q) / s_m(q) on interlacing pairs.  Everything is exact when the
q_j are ``fractions.Fraction``; floats work too.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .rsk import Tableau, is_partition, normalize_partition

__all__ = [
    "WeightVector",
    "ShapeLaw",
    "empty_row_prob",
    "ssyt_enumerate",
    "ssyt_count",
    "schur_eval",
    "shape_pmf",
    "shape_distribution",
    "interlaces",
    "transition_prob",
    "transition_distribution",
]


@dataclass(frozen=True)
class WeightVector:
    """Per-stage geometric parameters q_j, each in (0, 1)."""

    q: tuple

    def __post_init__(self):
        q = tuple(self.q)
        object.__setattr__(self, "q", q)
        if not q or any(not 0 < qj < 1 for qj in q):
            raise ValueError("every weight must lie strictly in (0, 1)")

    def __iter__(self):
        return iter(self.q)

    def __len__(self):
        return len(self.q)


def _weights(q) -> tuple:
    return tuple(q.q) if isinstance(q, WeightVector) else tuple(q)


def empty_row_prob(q):
    """a(q) = prod_j (1 - q_j): the chance one row of entries is all zero."""
    out = 1
    for qj in _weights(q):
        out = out * (1 - qj)
    return out


def _fillings(shape: tuple, k: int):
    """Yield all SSYT fillings of ``shape`` over {1..k} as row tuples."""
    shape = normalize_partition(shape)
    if len(shape) > k:
        return
    if not shape:
        yield ()
        return
    rows = [[0] * r for r in shape]
    cells = [(i, j) for i in range(len(shape)) for j in range(shape[i])]

    def rec(ci):
        if ci == len(cells):
            yield tuple(tuple(r) for r in rows)
            return
        i, j = cells[ci]
        lo = 1
        if j:
            lo = max(lo, rows[i][j - 1])
        if i:
            lo = max(lo, rows[i - 1][j] + 1)
        for v in range(lo, k + 1):
            rows[i][j] = v
            yield from rec(ci + 1)
        rows[i][j] = 0

    yield from rec(0)


def ssyt_enumerate(shape, k: int) -> list[Tableau]:
    """All semistandard tableaux of the given shape over {1..k}."""
    if not is_partition(shape):
        raise ValueError(f"{shape!r} is not a partition")
    return [Tableau(rows) for rows in _fillings(normalize_partition(shape), k)]


@lru_cache(maxsize=None)
def ssyt_count(shape: tuple, n: int) -> int:
    """#SSYT of ``shape`` over {1..n}, counted as interlacing chains.

    Peeling the largest letter off a tableau leaves a tableau over one
    letter fewer whose shape interlaces the original, so the count
    satisfies count(l, n) = sum over interlacing m of count(m, n-1).
    """
    shape = normalize_partition(shape)
    if len(shape) > n:
        return 0
    if not shape:
        return 1
    if n == 0:
        return 0
    total = 0
    for m in _interlacing_below(shape):
        total += ssyt_count(m, n - 1)
    return total


def _interlacing_below(l: tuple):
    """All partitions m with l_1 >= m_1 >= l_2 >= m_2 >= ..."""
    l = tuple(l)
    bounds = [(l[i + 1] if i + 1 < len(l) else 0, l[i]) for i in range(len(l))]
    for m in product(*[range(lo, hi + 1) for lo, hi in bounds]):
        yield normalize_partition(m)


@lru_cache(maxsize=None)
def _schur_rec(shape: tuple, x: tuple):
    # peel the largest letter: its boxes form a horizontal strip, so
    # s_l(x_1..x_k) = sum over interlacing m of x_k^{|l|-|m|} s_m(x_1..x_{k-1})
    if not shape:
        return 1
    if not x:
        return 0
    xk = x[-1]
    boxes = sum(shape)
    total = 0
    for m in _interlacing_below(shape):
        inner = _schur_rec(m, x[:-1])
        if inner:
            total = total + inner * xk ** (boxes - sum(m))
    return total


def schur_eval(shape, x):
    """s_shape(x): the sum of x^T over semistandard tableaux of the shape.

    Evaluated by stripping the tableaux letter by letter (each letter
    occupies a horizontal strip), which walks the same interlacing chains
    that :func:`ssyt_count` counts.  Exact whenever the inputs are exact
    (ints, Fractions); returns 0 for a shape with more parts than
    variables.
    """
    if not is_partition(shape):
        raise ValueError(f"{shape!r} is not a partition")
    x = tuple(x)
    shape = normalize_partition(shape)
    if len(shape) > len(x):
        return 0
    return _schur_rec(shape, x)


def shape_pmf(l, q, N: int):
    """P{shape = l} for the N-row geometric model with weights q."""
    q = _weights(q)
    if N < 0:
        raise ValueError("N must be >= 0")
    l = normalize_partition(l)
    if not is_partition(l):
        raise ValueError(f"{l!r} is not a partition")
    return empty_row_prob(q) ** N * schur_eval(l, q) * ssyt_count(l, N)


def _desc_tuples(maxval: int, length: int):
    """Weakly decreasing tuples of the given length with entries in [0, maxval]."""
    if length == 0:
        yield ()
        return
    for v in range(maxval, -1, -1):
        for rest in _desc_tuples(v, length - 1):
            yield (v,) + rest


def shape_distribution(q, N: int, residual: float = 1e-10) -> dict:
    """Truncated pmf over partitions with at most K parts.

    Widens the cap on the leading part until the captured mass exceeds
    1 - residual (the full sum telescopes to one by the Cauchy identity).
    """
    q = _weights(q)
    K = len(q)
    out: dict[tuple, object] = {}
    total = 0
    c = 0
    while True:
        for tail in _desc_tuples(c, K - 1):
            l = normalize_partition((c,) + tail)
            p = shape_pmf(l, q, N)
            out[l] = p
            total = total + p
        if 1 - total < residual:
            return out
        c += 1
        if c > 10000:
            raise RuntimeError("shape_distribution failed to converge")


def interlaces(l, m) -> bool:
    """l_1 >= m_1 >= l_2 >= m_2 >= ... (l grows from m by a horizontal strip)."""
    if not is_partition(l):
        raise ValueError(f"{l!r} is not a partition")
    if not is_partition(m):
        raise ValueError(f"{m!r} is not a partition")
    l = normalize_partition(l)
    m = normalize_partition(m)
    if len(m) > len(l):
        return False
    for i in range(len(l)):
        mi = m[i] if i < len(m) else 0
        if l[i] < mi:
            return False
        if i + 1 < len(l) and mi < l[i + 1]:
            return False
    return True


def transition_prob(m, l, q):
    """One-row growth probability a(q) s_l(q) / s_m(q), zero off interlacing pairs."""
    q = _weights(q)
    if not interlaces(l, m):
        return 0
    sm = schur_eval(m, q)
    sl = schur_eval(l, q)
    a = empty_row_prob(q)
    return a * sl / sm


def transition_distribution(m, q, residual: float = 1e-10) -> dict:
    """Truncated transition row from ``m``; sums to one by the Pieri rule."""
    q = _weights(q)
    m = normalize_partition(m)
    K = len(q)
    out: dict[tuple, object] = {}
    total = 0
    m1 = m[0] if m else 0
    pad = list(m) + [0] * (K - len(m))
    # interlacing forces l_i in [m_i, m_{i-1}] for i >= 2; only l_1 is free
    inner_ranges = [range(pad[i], pad[i - 1] + 1) for i in range(1, K)]
    c = m1
    while True:
        for rest in product(*inner_ranges):
            l = normalize_partition((c,) + tuple(rest))
            out[l] = transition_prob(m, l, q)
            total = total + out[l]
        if 1 - total < residual:
            return out
        c += 1
        if c > m1 + 10000:
            raise RuntimeError("transition_distribution failed to converge")


@dataclass(frozen=True)
class ShapeLaw:
    """The insertion-shape law for a fixed weight vector and row count."""

    q: WeightVector
    N: int

    def pmf(self, l):
        return shape_pmf(l, self.q, self.N)

    def distribution(self, residual: float = 1e-10) -> dict:
        return shape_distribution(self.q, self.N, residual)
