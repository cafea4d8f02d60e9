"""Couplings between Gaussian and Haar-orthogonal random matrices.

Orthonormalizing the columns of a square Gaussian matrix Y yields a
Haar-distributed orthogonal matrix U on the same probability space.
The pair keeps its coupling trace: for each column j (1-based) the
projection coefficients onto the preceding orthonormal columns and the
residual norm r_j > 0, so that

    y_j = sum_{k<j} trace[k, j] * nu_k + r_j * nu_j

holds up to rounding.  A second, randomized coupling right-multiplies
both matrices by the block rotation diag(V_m, I) with V_m Haar on the
m x m orthogonal group; this uniformizes entries within the first m
coordinates of every row while preserving the truncated row norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, DimensionError
from .rng import Seed, sample_gaussian

# Residual norms below DEGENERACY_FACTOR * sqrt(n) abort the coupling.
DEGENERACY_FACTOR = 1e-8

# Column-block width for the orthogonalization kernel; panels this wide
# keep the bulk of the O(n^3) work in matrix-matrix products.
_BLOCK = 512


@dataclass(frozen=True)
class CoupledPair:
    """A Gaussian matrix, its orthonormalization, and the coupling trace.

    Attributes
    ----------
    y : ndarray
        (n, n) Gaussian input.  Not copied; treat as immutable.
    u : ndarray
        (n, n) orthogonal matrix, columnwise Gram-Schmidt of ``y``.
    residual_norms : ndarray
        Length-n vector; entry j-1 is r_j = ||y_j - P_{span(y_1..y_{j-1})} y_j|| > 0.
    trace : ndarray
        (n, n) upper triangular.  The strict upper part holds the
        projection coefficients <y_j, nu_k> for k < j; the diagonal
        repeats ``residual_norms``.
    n : int
        Dimension.
    """

    y: np.ndarray
    u: np.ndarray
    residual_norms: np.ndarray
    trace: np.ndarray
    n: int


@dataclass(frozen=True)
class RotatedPair:
    """Result of the randomized block-rotation coupling.

    ``y`` stays Gaussian and ``u`` stays Haar orthogonal; columns beyond
    ``m`` equal those of the source pair exactly.
    """

    y: np.ndarray
    u: np.ndarray
    n: int
    m: int


def gram_schmidt_couple(y: np.ndarray, block: int = _BLOCK) -> CoupledPair:
    """Columnwise Gram-Schmidt orthonormalization with coupling trace.

    Classical Gram-Schmidt with a full second orthogonalization pass
    (CGS2), processed in column panels so almost all work runs as
    matrix products.  In exact arithmetic this equals the classical
    procedure: nu_j points along the residual of y_j, hence
    <y_j, nu_j> = r_j > 0.  The second pass keeps ``||U^T U - I||_max``
    at machine precision through n = 8192.

    Parameters
    ----------
    y : ndarray
        Square matrix with numerically independent columns.
    block : int, optional
        Panel width of the blocked kernel; affects speed only.

    Raises
    ------
    DimensionError
        If ``y`` is not square 2-D with finite entries.
    DegeneracyError
        If some residual norm falls below ``1e-8 * sqrt(n)``; the error
        names the offending column (1-based).
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 2 or y.shape[0] != y.shape[1] or y.shape[0] < 1:
        raise DimensionError(f"expected a square matrix, got shape {y.shape}")
    if not np.isfinite(y).all():
        raise DimensionError("matrix entries must be finite")
    n = y.shape[0]
    threshold = DEGENERACY_FACTOR * math.sqrt(n)

    u = np.empty((n, n), order="F")
    trace = np.zeros((n, n))
    for start in range(0, n, block):
        stop = min(start + block, n)
        panel = np.asfortranarray(y[:, start:stop])
        if start:
            prev = u[:, :start]
            c1 = prev.T @ panel
            panel -= prev @ c1
            c2 = prev.T @ panel
            panel -= prev @ c2
            trace[:start, start:stop] = c1 + c2
        for j in range(stop - start):
            v = panel[:, j]
            if j:
                done = panel[:, :j]
                c1 = done.T @ v
                v -= done @ c1
                c2 = done.T @ v
                v -= done @ c2
                trace[start:start + j, start + j] = c1 + c2
            norm = float(np.linalg.norm(v))
            if not norm > threshold:
                raise DegeneracyError(start + j + 1, norm, threshold)
            trace[start + j, start + j] = norm
            panel[:, j] = v / norm
        u[:, start:stop] = panel

    residual_norms = np.ascontiguousarray(np.diag(trace))
    return CoupledPair(y=y, u=u, residual_norms=residual_norms, trace=trace, n=n)


def haar_orthogonal(k: int, seed: Seed) -> np.ndarray:
    """k x k orthogonal matrix distributed by Haar measure on O(k).

    Realized as ``gram_schmidt_couple(sample_gaussian(k, k, seed)).u``,
    so it is deterministic per seed.
    """
    if k < 1:
        raise DimensionError(f"dimension must be >= 1, got {k}")
    return gram_schmidt_couple(sample_gaussian(k, k, seed)).u


def randomized_couple(
    pair: CoupledPair,
    m: int,
    seed: Seed,
    v_m: np.ndarray | None = None,
) -> RotatedPair:
    """Right-multiply a coupled pair by the block rotation diag(V_m, I).

    V_m is Haar on O(m) (drawn from ``seed`` unless injected through
    ``v_m``, which exists for tests).  Both the Gaussian law of y and
    the Haar law of u are invariant under the rotation, and for every
    row the Euclidean norm of the first m entries of y - sqrt(n) u is
    preserved exactly in exact arithmetic.
    """
    n = pair.n
    if not 1 <= m <= n:
        raise DimensionError(f"m must satisfy 1 <= m <= {n}, got {m}")
    if v_m is None:
        v_m = haar_orthogonal(m, seed)
    elif v_m.shape != (m, m):
        raise DimensionError(f"injected rotation must be {m}x{m}, got {v_m.shape}")
    y2 = pair.y.copy()
    u2 = pair.u.copy()
    y2[:, :m] = pair.y[:, :m] @ v_m
    u2[:, :m] = pair.u[:, :m] @ v_m
    return RotatedPair(y=y2, u=u2, n=n, m=m)
