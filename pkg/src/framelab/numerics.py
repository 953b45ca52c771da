"""Dense complex linear algebra with one shared floating-point policy.

Every operator in framelab is materialized as a dense ``complex128`` numpy
array; problem sizes are desk scale, so there is no sparse or iterative
machinery.  All rank decisions and pseudoinverse cutoffs are concentrated in
:class:`RankPolicy` so no other module hand-rolls its own thresholds.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import NonSquareError, NotHermitianError, ValidationError

DEFAULT_RANK_RTOL = 1e-10
HERMITIAN_RTOL = 1e-12

RANK_TOL_ENV = "FRAMELAB_RANK_TOL"


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValidationError(f"expected a 2-d array, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix entries must be finite")
    return m


@dataclass(frozen=True)
class RankPolicy:
    """Relative cutoff turning singular values into a numerical rank.

    A singular value counts toward the rank when it exceeds
    ``relative_threshold * sigma_max * max(rows, cols)``.
    """

    relative_threshold: float = DEFAULT_RANK_RTOL

    def __post_init__(self) -> None:
        if not (self.relative_threshold > 0):
            raise ValidationError("relative_threshold must be positive")

    def cutoff(self, singular_values: np.ndarray, shape: tuple[int, int]) -> float:
        if singular_values.size == 0:
            return 0.0
        return self.relative_threshold * float(singular_values[0]) * max(shape)

    @classmethod
    def from_environment(cls) -> "RankPolicy":
        """Default policy, overridable through the FRAMELAB_RANK_TOL variable."""
        raw = os.environ.get(RANK_TOL_ENV)
        if raw is None:
            return cls()
        try:
            return cls(relative_threshold=float(raw))
        except ValueError as exc:
            raise ValidationError(f"{RANK_TOL_ENV} must be a number, got {raw!r}") from exc


def hermitian_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as unitary columns, so ``a = V @ diag(vals) @ V.conj().T``.
    The input is symmetrized to absorb roundoff; asymmetry beyond
    ``HERMITIAN_RTOL`` times the matrix scale is an error.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {m.shape}")
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    asymmetry = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if asymmetry > HERMITIAN_RTOL * scale:
        raise NotHermitianError(
            f"asymmetry {asymmetry:.3e} exceeds {HERMITIAN_RTOL:.0e} * scale {scale:.3e}"
        )
    sym = (m + m.conj().T) / 2.0
    values, vectors = np.linalg.eigh(sym)
    return values, vectors


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD ``a = U @ diag(s) @ V.conj().T`` with ``s`` descending."""
    m = as_matrix(a)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    return u, s, vh.conj().T


def singular_values(a) -> np.ndarray:
    m = as_matrix(a)
    return np.linalg.svd(m, compute_uv=False)


def pinv(a, policy: RankPolicy | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the policy's singular value cutoff.

    Inverts on the numerical range and annihilates the numerical null space,
    which is exactly the bounded left inverse used by the dual constructions.
    """
    m = as_matrix(a)
    policy = policy or RankPolicy()
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    cut = policy.cutoff(s, m.shape)
    inverted = np.zeros_like(s)
    keep = s > cut
    inverted[keep] = 1.0 / s[keep]
    return vh.conj().T @ (inverted[:, None] * u.conj().T)


def rank(a, policy: RankPolicy | None = None) -> int:
    """Number of singular values above the policy cutoff."""
    policy = policy or RankPolicy()
    s = singular_values(a)
    return int(np.count_nonzero(s > policy.cutoff(s, as_matrix(a).shape)))


def nullity(a, policy: RankPolicy | None = None) -> int:
    m = as_matrix(a)
    return m.shape[1] - rank(m, policy)


def condition_number(a) -> float:
    """Ratio of extreme singular values; inf when the smallest is zero."""
    s = singular_values(a)
    if s.size == 0 or s[-1] <= 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def operator_norm(a) -> float:
    s = singular_values(a)
    return float(s[0]) if s.size else 0.0
