"""Dense complex linear algebra substrate.

Matrices are plain ``numpy.ndarray`` objects with dtype ``complex128``;
the helpers here validate shapes and structural properties (unitarity,
hermiticity) instead of wrapping arrays in dedicated classes.  Seeded
randomness goes through ``numpy.random.SeedSequence`` so that the same
seed always reproduces the same stream, and worker streams can be split
off deterministically with :func:`child_seed`.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .exceptions import DimensionError, OperatorError, SizeLimitError

UNITARITY_TOL = 1e-10
HERMITICITY_TOL = 1e-10

# Dense eigendecomposition is cubic; above this dimension the dense
# evolution path refuses and callers must use the sparse one.
DENSE_EVOLUTION_LIMIT = 4000


def rng_from_seed(seed) -> np.random.Generator:
    """Deterministic generator from a 64-bit integer seed or a SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def child_seed(seed, *key: int) -> np.random.SeedSequence:
    """Derive an independent child stream from (seed, key).

    Distinct keys give statistically independent streams, and the derivation
    does not depend on how many workers consume them, which is what makes
    parallel sweeps reproducible.
    """
    if isinstance(seed, np.random.SeedSequence):
        entropy = seed.entropy
    else:
        entropy = int(seed)
    return np.random.SeedSequence(entropy=entropy, spawn_key=tuple(int(k) for k in key))


def derive_seed(seed, *key: int) -> int:
    """Collapse a child stream to a single 64-bit integer seed."""
    return int(child_seed(seed, *key).generate_state(1, np.uint64)[0])


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex128 array, rejecting NaN/Inf entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def require_square(a) -> np.ndarray:
    m = as_complex_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def unitarity_defect(u: np.ndarray) -> float:
    """Max-norm deviation of U†U from the identity."""
    u = require_square(u)
    n = u.shape[0]
    return max_abs(u.conj().T @ u - np.eye(n))


def require_unitary(u, tol: float = UNITARITY_TOL) -> np.ndarray:
    u = require_square(u)
    defect = unitarity_defect(u)
    if defect > tol:
        raise OperatorError(f"matrix is not unitary: max |U†U - I| = {defect:.3e} > {tol:.1e}")
    return u


def hermiticity_defect(h: np.ndarray) -> float:
    h = require_square(h)
    return max_abs(h - h.conj().T)


def require_hermitian(h, tol: float = HERMITICITY_TOL) -> np.ndarray:
    h = require_square(h)
    defect = hermiticity_defect(h)
    if defect > tol:
        raise OperatorError(f"matrix is not hermitian: max |H - H†| = {defect:.3e} > {tol:.1e}")
    return h


def haar_unitary(m: int, seed) -> np.ndarray:
    """Draw an m x m unitary from the Haar measure.

    QR-factorizes a complex Ginibre matrix and fixes the phase freedom by
    making the diagonal of R real and positive.  Without that phase fix the
    QR factorization is not unique and the resulting distribution is not
    Haar; with it, the first moments satisfy E|U_ij|^2 = 1/m.
    """
    if m < 1:
        raise DimensionError("unitary dimension must be at least 1")
    rng = rng_from_seed(seed)
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    defect = unitarity_defect(q)
    if defect > UNITARITY_TOL:
        raise OperatorError(f"generated matrix failed the unitarity check ({defect:.3e})")
    return q


def determinant(a) -> complex:
    """Determinant of a square complex matrix; the empty 0x0 matrix has det 1."""
    a = require_square(a)
    if a.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(a))


def matrix_exponential_apply(h, v, t: float) -> np.ndarray:
    """Apply exp(-i*H*t) to a state vector via hermitian eigendecomposition.

    The full spectrum is computed, so this is cubic in the dimension and
    limited to ``DENSE_EVOLUTION_LIMIT``.  The evolution is exactly unitary
    up to round-off, so norms are preserved to ~1e-15 relative.
    """
    h = require_hermitian(h)
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] != h.shape[0]:
        raise DimensionError(
            f"state vector of length {v.shape} does not match operator dimension {h.shape[0]}"
        )
    if h.shape[0] > DENSE_EVOLUTION_LIMIT:
        raise SizeLimitError(
            f"dense evolution limited to dimension {DENSE_EVOLUTION_LIMIT}, got {h.shape[0]}"
        )
    w, p = np.linalg.eigh(h)
    return p @ (np.exp(-1j * w * t) * (p.conj().T @ v))


def _spectral_norm_estimate(h: sparse.spmatrix, iterations: int = 12) -> float:
    """Deterministic power-iteration estimate of the spectral norm."""
    dim = h.shape[0]
    x = np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)
    est = 0.0
    for _ in range(iterations):
        y = h @ x
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return 0.0
        est = norm
        x = y / norm
    return est


def matrix_exponential_apply_sparse(h: sparse.spmatrix, v, t: float,
                                    hermiticity_tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Apply exp(-i*H*t) to a vector for a sparse hermitian H.

    Uses scaling with a truncated Taylor series: the propagator is split into
    s substeps with s chosen so the scaled spectral radius is at most ~1,
    which keeps the series short and the round-off bounded.  Fully
    deterministic (the norm estimate is a fixed-start power iteration), so
    repeated runs and parallel workers produce bit-identical results.
    """
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square operator, got shape {h.shape}")
    diff = (h - h.conj().T).tocsr()
    defect = max_abs(diff.data) if diff.nnz else 0.0
    if defect > hermiticity_tol:
        raise OperatorError(f"operator is not hermitian: max |H - H†| = {defect:.3e}")
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] != h.shape[0]:
        raise DimensionError("state vector does not match operator dimension")
    radius = abs(t) * _spectral_norm_estimate(h)
    steps = max(1, int(np.ceil(1.2 * radius)))
    a = h.tocsr() * (-1j * t / steps)
    result = v.copy()
    for _ in range(steps):
        term = result.copy()
        acc = result.copy()
        scale = float(np.linalg.norm(acc))
        for k in range(1, 80):
            term = (a @ term) / k
            acc += term
            if float(np.linalg.norm(term)) <= 1e-16 * max(scale, 1e-300):
                break
        result = acc
    return result
