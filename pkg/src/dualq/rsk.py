"""Row insertion, the service-matrix word, min/max operator chains, and
brute-force lattice-path oracles.

The central identity: writing w(U) for the word of the N x K matrix U and
(lambda_1 >= ... >= lambda_K) for the shape of its insertion tableau,
lambda_1 equals both the up-right path maximum over U and the last queue
departure D(N, K), while lambda_K equals the skew path minimum and the
cumulative store output R(N).  :func:`verify_row_queue` checks all six
numbers against each other.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import tandem

__all__ = [
    "Tableau",
    "SizeLimitError",
    "BRUTE_FORCE_LIMIT",
    "normalize_partition",
    "is_partition",
    "word_of",
    "insert",
    "tableau_of",
    "shape",
    "pretty",
    "counting_maps",
    "nabla",
    "triangle",
    "lambda_operators",
    "path_max",
    "path_min",
    "verify_row_queue",
    "RowQueueReport",
]

BRUTE_FORCE_LIMIT = 14


class SizeLimitError(ValueError):
    """Exhaustive path enumeration would be too large."""


def normalize_partition(parts) -> tuple:
    """Drop trailing zeros; partitions equal up to them are identified."""
    parts = tuple(int(p) for p in parts)
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


def is_partition(parts) -> bool:
    parts = tuple(parts)
    return all(int(p) == p and p >= 0 for p in parts) and all(
        parts[i] >= parts[i + 1] for i in range(len(parts) - 1)
    )


class Tableau:
    """Semistandard Young tableau: rows weakly increase left to right,
    columns strictly increase downward."""

    __slots__ = ("rows",)

    def __init__(self, rows=()):
        self.rows = [list(r) for r in rows]

    def shape(self) -> tuple:
        return normalize_partition(len(r) for r in self.rows)

    def size(self) -> int:
        return sum(len(r) for r in self.rows)

    def is_valid(self, alphabet: int | None = None) -> bool:
        for i, row in enumerate(self.rows):
            if i + 1 < len(self.rows) and len(self.rows[i + 1]) > len(row):
                return False
            for j, x in enumerate(row):
                if x < 1 or (alphabet is not None and x > alphabet):
                    return False
                if j and row[j - 1] > x:
                    return False
                if i and self.rows[i - 1][j] >= x:
                    return False
        return True

    def weight(self, alphabet: int) -> tuple:
        counts = [0] * alphabet
        for row in self.rows:
            for x in row:
                counts[x - 1] += 1
        return tuple(counts)

    def __eq__(self, other):
        return isinstance(other, Tableau) and self.rows == other.rows

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    def __repr__(self):
        return f"Tableau({self.rows!r})"


def pretty(T: Tableau) -> str:
    if not T.rows:
        return "(empty tableau)"
    return "\n".join("|" + "|".join(str(x) for x in row) + "|" for row in T.rows)


def _bump(rows: list[list[int]], x: int) -> None:
    # in-place row insertion; an empty row behaves as all-zero, so the
    # cascade always terminates by appending
    i = 0
    while True:
        if i == len(rows):
            rows.append([x])
            return
        row = rows[i]
        j = bisect.bisect_right(row, x)
        if j == len(row):
            row.append(x)
            return
        x, row[j] = row[j], x
        i += 1


def insert(T: Tableau, letter: int) -> Tableau:
    """Row-insert one letter, returning a new tableau with one more box."""
    if letter < 1 or int(letter) != letter:
        raise ValueError("letters are positive integers")
    rows = [list(r) for r in T.rows]
    _bump(rows, int(letter))
    out = Tableau.__new__(Tableau)
    out.rows = rows
    return out


def tableau_of(word) -> Tableau:
    """Left fold of row insertion over the word, starting from empty."""
    rows: list[list[int]] = []
    for x in np.asarray(word, dtype=np.int64).tolist():
        _bump(rows, x)
    out = Tableau.__new__(Tableau)
    out.rows = rows
    return out


def shape(T: Tableau) -> tuple:
    return T.shape()


def word_of(U) -> np.ndarray:
    """Word of the matrix: row i contributes 1^u(i,1) 2^u(i,2) ... K^u(i,K)."""
    U = tandem._as_matrix(U)
    if U.u.dtype.kind != "i":
        raise ValueError("the word construction needs integer entries")
    letters = np.tile(np.arange(1, U.K + 1, dtype=np.int64), U.N)
    return np.repeat(letters, U.u.reshape(-1))


def counting_maps(U) -> np.ndarray:
    """Prefix letter counts x_i(n) = #{j <= n : word_j = i}.

    Returns a (K, M+1) array, n running over 0..M.
    """
    U = tandem._as_matrix(U)
    word = word_of(U)
    M = word.size
    x = np.zeros((U.K, M + 1), dtype=np.int64)
    for i in range(1, U.K + 1):
        x[i - 1, 1:] = np.cumsum(word == i)
    return x


def nabla(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(x nabla y)(n) = max_{0<=m<=n} [x(m) + y(n) - y(m)]."""
    return np.maximum.accumulate(x - y) + y


def triangle(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(x triangle y)(n) = min_{0<=m<=n} [x(m) + y(n) - y(m)]."""
    return np.minimum.accumulate(x - y) + y


def lambda_operators(U) -> tuple[int, int]:
    """(lambda_1, lambda_K) via the operator chains, evaluated left to right.

    lambda_1 = x_1 nabla x_2 nabla ... nabla x_K (M) and
    lambda_K = x_K triangle ... triangle x_2 triangle x_1 (M); the
    operations are non-associative, so the fold order matters.
    """
    x = counting_maps(U)
    K, M = x.shape[0], x.shape[1] - 1
    top = x[0]
    for i in range(1, K):
        top = nabla(top, x[i])
    bottom = x[K - 1]
    for i in range(K - 2, -1, -1):
        bottom = triangle(bottom, x[i])
    return int(top[M]), int(bottom[M])


@lru_cache(maxsize=None)
def _up_right_paths(N: int, K: int) -> np.ndarray:
    """Flat node indices of every up-right path (1,1) -> (N,K); each path
    has N+K-1 nodes."""
    paths = []
    for rights in combinations(range(N + K - 2), N - 1):
        rights = set(rights)
        i = j = 0  # 0-based (customer, stage)
        nodes = [0]
        for step in range(N + K - 2):
            if step in rights:
                i += 1
            else:
                j += 1
            nodes.append(i * K + j)
        paths.append(nodes)
    return np.array(paths, dtype=np.intp)


@lru_cache(maxsize=None)
def _skew_paths(N: int, K: int) -> list[np.ndarray]:
    """Flat node indices of every path in the dual set.

    A path is determined by strictly increasing rows i_{K-1} < ... < i_1;
    it collects column K up to row i_{K-1}-1, column j between i_j and
    i_{j-1} exclusive, and column 1 after i_1.  All paths have (N-K+1)^+
    nodes; the set is empty when N < K.
    """
    if K == 1:
        return [np.arange(N, dtype=np.intp) * K + 0]
    if N < K:
        return []
    paths = []
    for combo in combinations(range(1, N + 1), K - 1):
        cuts = (0,) + combo + (N + 1,)  # i_K=0, i_{K-1}..i_1, i_0=N+1
        nodes = []
        for idx in range(K):
            col = K - idx  # 1-based column, from K down to 1
            lo, hi = cuts[idx] + 1, cuts[idx + 1] - 1
            for row in range(lo, hi + 1):
                nodes.append((row - 1) * K + (col - 1))
        paths.append(np.array(nodes, dtype=np.intp))
    return paths


def _check_limit(U, limit):
    if U.N + U.K > limit:
        raise SizeLimitError(
            f"N+K = {U.N + U.K} exceeds the brute-force limit {limit}"
        )


def path_max(U, limit: int = BRUTE_FORCE_LIMIT):
    """Exhaustive maximum of node sums over up-right paths (1,1)->(N,K)."""
    U = tandem._as_matrix(U)
    _check_limit(U, limit)
    flat = U.u.reshape(-1)
    idx = _up_right_paths(U.N, U.K)
    return flat[idx].sum(axis=1).max()


def path_min(U, limit: int = BRUTE_FORCE_LIMIT):
    """Exhaustive minimum of node sums over the dual path set; 0 when empty."""
    U = tandem._as_matrix(U)
    _check_limit(U, limit)
    paths = _skew_paths(U.N, U.K)
    if not paths:
        return U.u.dtype.type(0)
    flat = U.u.reshape(-1)
    return min(flat[p].sum() for p in paths)


@dataclass(frozen=True)
class RowQueueReport:
    """The six-way identity, reported as two quadruples
    (tableau, operator chain, path oracle, tandem recursion)."""

    lambda1: tuple
    lambdaK: tuple
    ok: bool


def verify_row_queue(U, limit: int = BRUTE_FORCE_LIMIT) -> RowQueueReport:
    U = tandem._as_matrix(U)
    sh = tableau_of(word_of(U)).shape()
    lam1_rsk = sh[0] if sh else 0
    lamK_rsk = sh[U.K - 1] if len(sh) >= U.K else 0
    lam1_chain, lamK_chain = lambda_operators(U)
    pmax = int(path_max(U, limit))
    pmin = int(path_min(U, limit))
    D = int(queue_last_departure(U))
    R = int(store_total(U))
    lam1 = (lam1_rsk, lam1_chain, pmax, D)
    lamK = (lamK_rsk, lamK_chain, pmin, R)
    ok = len(set(lam1)) == 1 and len(set(lamK)) == 1
    return RowQueueReport(lambda1=lam1, lambdaK=lamK, ok=ok)


def queue_last_departure(U):
    U = tandem._as_matrix(U)
    return tandem.queue_departures(U)[U.N, U.K]


def store_total(U):
    U = tandem._as_matrix(U)
    return tandem.store_flow(U)[2][-1]
