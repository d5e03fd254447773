"""Permanent, hafnian and torontonian kernels, plus the repeated-row/column
submatrix construction and the permanent-based transition probability.

All three kernels are exponential-time by nature, so each carries a
documented size cap and raises :class:`SizeLimitError` beyond it.  The
empty 0x0 matrix has permanent, hafnian and determinant equal to 1, which
keeps the inclusion-exclusion identities valid at the boundary.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exceptions import ConservationError, DimensionError, OperatorError, SizeLimitError
from .linalg import determinant, max_abs, require_square

PERMANENT_SIZE_LIMIT = 20
PERMANENT_NAIVE_SIZE_LIMIT = 10
HAFNIAN_SIZE_LIMIT = 16
TORONTONIAN_SIZE_LIMIT = 20
SYMMETRY_TOL = 1e-10


def check_occupations(occ: Sequence[int], sites: int | None = None) -> tuple[int, ...]:
    """Validate an occupation configuration (nonnegative ints, optional length)."""
    config = tuple(int(c) for c in occ)
    if any(c < 0 for c in config):
        raise ValueError(f"occupations must be nonnegative, got {config}")
    if sites is not None and len(config) != sites:
        raise DimensionError(f"expected {sites} occupation entries, got {len(config)}")
    return config


def threshold_clicks(occ: Sequence[int]) -> tuple[bool, ...]:
    """Threshold-detector view of an occupation configuration: one boolean
    per mode, True wherever at least one excitation is present."""
    return tuple(c > 0 for c in check_occupations(occ))


def permanent(a) -> complex:
    """Permanent of a square complex matrix via Ryser's formula.

    Runs in O(2^N * N) using Gray-code updates of the running row sums,
    so only one column is added or removed per subset step.  Practical cap
    is N <= 20; use :func:`permanent_naive` as the independent cross-check.
    """
    a = require_square(a)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n > PERMANENT_SIZE_LIMIT:
        raise SizeLimitError(f"permanent limited to {PERMANENT_SIZE_LIMIT}x{PERMANENT_SIZE_LIMIT}, got {n}")
    cols = a.T.copy()
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0.0 + 0.0j
    gray = 0
    sign = 1
    for k in range(1, 1 << n):
        new_gray = k ^ (k >> 1)
        bit = new_gray ^ gray
        j = bit.bit_length() - 1
        if new_gray & bit:
            row_sums += cols[j]
        else:
            row_sums -= cols[j]
        gray = new_gray
        sign = -sign  # parity of |subset| flips on every Gray-code step
        total += sign * np.prod(row_sums)
    if n % 2:
        total = -total
    return complex(total)


@lru_cache(maxsize=16)
def _permutation_indices(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def permanent_naive(a) -> complex:
    """Permanent as the literal sum over all N! permutations.

    Exists purely as the independent oracle for :func:`permanent`; the
    factorial cost limits it to N <= 10.
    """
    a = require_square(a)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n > PERMANENT_NAIVE_SIZE_LIMIT:
        raise SizeLimitError(f"naive permanent limited to {PERMANENT_NAIVE_SIZE_LIMIT}, got {n}")
    perms = _permutation_indices(n)
    rows = np.arange(n)
    return complex(np.sum(np.prod(a[rows[np.newaxis, :], perms], axis=1)))


def build_submatrix(u, input_occ: Sequence[int], output_occ: Sequence[int]) -> np.ndarray:
    """Submatrix with row i of ``u`` repeated input_occ[i] times and column j
    repeated output_occ[j] times, in ascending site order.

    The result is n x n where n is the shared particle total; a total
    mismatch raises :class:`ConservationError`.
    """
    u = require_square(u)
    m = u.shape[0]
    inp = check_occupations(input_occ, m)
    out = check_occupations(output_occ, m)
    if sum(inp) != sum(out):
        raise ConservationError(
            f"input total {sum(inp)} differs from output total {sum(out)}"
        )
    rows = [i for i, c in enumerate(inp) for _ in range(c)]
    cols = [j for j, c in enumerate(out) for _ in range(c)]
    return u[np.ix_(rows, cols)]


def transition_probability(u, input_occ: Sequence[int], output_occ: Sequence[int]) -> float:
    """Probability of measuring ``output_occ`` after sending ``input_occ``
    through the linear network ``u``:

        |perm(sub)|^2 / (prod_i input_i! * prod_j output_j!)
    """
    sub = build_submatrix(u, input_occ, output_occ)
    norm = 1.0
    for c in itertools.chain(input_occ, output_occ):
        norm *= math.factorial(int(c))
    value = abs(permanent(sub)) ** 2 / norm
    return float(value)


def hafnian(a) -> complex:
    """Hafnian of an even-dimensional symmetric matrix.

    Sums the (2n-1)!! perfect matchings by recursively pairing the lowest
    free index with every other free index, memoized on the set of free
    indices.  Asymmetric input is rejected outright (no silent
    symmetrization) so data errors cannot skew results.
    """
    a = require_square(a)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n % 2:
        raise DimensionError(f"hafnian requires even dimension, got {n}")
    if n > HAFNIAN_SIZE_LIMIT:
        raise SizeLimitError(f"hafnian limited to {HAFNIAN_SIZE_LIMIT}x{HAFNIAN_SIZE_LIMIT}, got {n}")
    defect = max_abs(a - a.T)
    if defect > SYMMETRY_TOL:
        raise OperatorError(f"matrix is not symmetric: max |A - A^T| = {defect:.3e}")

    memo: dict[int, complex] = {0: 1.0 + 0.0j}

    def haf(mask: int) -> complex:
        cached = memo.get(mask)
        if cached is not None:
            return cached
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        acc = 0.0 + 0.0j
        sub = rest
        while sub:
            j = (sub & -sub).bit_length() - 1
            sub &= sub - 1
            acc += a[i, j] * haf(rest & ~(1 << j))
        memo[mask] = acc
        return acc

    return complex(haf((1 << n) - 1))


def torontonian(a) -> complex:
    """Alternating subset-determinant sum over an m x m matrix:

        tor(A) = sum over subsets W of {1..m} of (-1)^|W| * det(A[W, W])

    with det of the empty submatrix equal to 1.  This is the plain
    determinant form (no inverse square root), summed over kept-index
    subsets in ascending bitmask order so the arithmetic is reproducible.
    """
    a = require_square(a)
    m = a.shape[0]
    if m > TORONTONIAN_SIZE_LIMIT:
        raise SizeLimitError(f"torontonian limited to m <= {TORONTONIAN_SIZE_LIMIT}, got {m}")
    indices = np.arange(m)
    total = 0.0 + 0.0j
    for mask in range(1 << m):
        kept = indices[[(mask >> i) & 1 == 1 for i in range(m)]]
        sign = -1 if bin(mask).count("1") % 2 else 1
        total += sign * determinant(a[np.ix_(kept, kept)])
    return complex(total)
