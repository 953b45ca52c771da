"""Reproducing pairs: mixed resolution operators, induced geometry, duals.

A pair of families over one space interacts through the resolution operator
``S f = sum_j w_j <f, psi_j> phi_j`` (analysis against the first family,
synthesis onto the second).  Nothing here assumes frame bounds of either
family; everything hinges on the resolution operator being invertible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import (
    DimensionMismatchError,
    NotAFrameError,
    NotInjectiveError,
    NotInvertibleError,
    NotSurjectiveError,
    SpaceMismatchError,
    ValidationError,
)
from .frames import VectorFamily, frame_operator, synthesis
from .rkhs import KernelTable

CONDITION_THRESHOLD = 1e10
FRAME_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class ResolutionReport:
    """Resolution operator of a pair together with its invertibility verdict."""

    operator: np.ndarray
    condition: float
    invertible: bool
    inverse: np.ndarray | None
    condition_threshold: float

    def to_json(self) -> dict:
        return {
            "operator": [[float(z.real), float(z.imag)] for z in self.operator.ravel()],
            "dim": self.operator.shape[0],
            "condition": self.condition if np.isfinite(self.condition) else "infinite",
            "invertible": self.invertible,
            "condition_threshold": self.condition_threshold,
        }


def _check_same_space(psi: VectorFamily, phi: VectorFamily) -> None:
    if psi.space != phi.space:
        raise SpaceMismatchError("families live on different discretized spaces")
    if psi.dim != phi.dim:
        raise SpaceMismatchError(
            f"families have different ambient dimensions {psi.dim} and {phi.dim}"
        )


def resolution_operator(
    psi: VectorFamily,
    phi: VectorFamily,
    condition_threshold: float = CONDITION_THRESHOLD,
) -> ResolutionReport:
    """Analysis against ``psi`` composed with weighted synthesis onto ``phi``."""
    _check_same_space(psi, phi)
    w = psi.space.weights
    operator = phi.members.T @ (w[:, None] * psi.members.conj())
    condition = numerics.condition_number(operator)
    invertible = bool(np.isfinite(condition) and condition <= condition_threshold)
    inverse = np.linalg.inv(operator) if invertible else None
    return ResolutionReport(
        operator=operator,
        condition=condition,
        invertible=invertible,
        inverse=inverse,
        condition_threshold=condition_threshold,
    )


def extended_synthesis(family: VectorFamily, values) -> np.ndarray:
    """Weighted synthesis on an arbitrary coefficient function.

    At finite resolution every coefficient function pairs boundedly against
    the family, so the extension of :func:`framelab.frames.synthesis` is the
    same weighted sum on a larger domain; it is kept as its own entry point
    because several constructions are phrased through it rather than through
    the frame calculus.
    """
    return synthesis(family, values)


def pair_redundancy(family: VectorFamily, rank_policy: numerics.RankPolicy | None = None) -> int:
    """Dimension of the null space of the weighted synthesis map."""
    return family.size - numerics.rank(family.members, rank_policy)


@dataclass(frozen=True, eq=False)
class CoefficientGeometry:
    """Geometry induced on coefficient functions by one family.

    ``gram[j, k]`` is the ambient inner product of the members at nodes j and
    k; together with the node weights it expresses the induced pairing as a
    double sum, while :func:`induced_inner` evaluates the same pairing through
    the synthesis images.
    """

    family: VectorFamily
    gram: np.ndarray

    def __post_init__(self) -> None:
        g = numerics.as_matrix(self.gram)
        n = self.family.size
        if g.shape != (n, n):
            raise ValidationError(f"gram table must be {n}x{n}, got {g.shape}")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)


def coefficient_geometry(family: VectorFamily) -> CoefficientGeometry:
    gram = family.members @ family.members.conj().T
    return CoefficientGeometry(family=family, gram=gram)


def induced_inner(geometry: CoefficientGeometry, f_values, g_values) -> complex:
    """Pairing ``< T F, T G >`` of synthesis images.

    This is a genuine inner product only modulo the null space of the
    synthesis map: any coefficient function synthesizing to zero pairs to
    zero against everything.
    """
    tf = extended_synthesis(geometry.family, f_values)
    tg = extended_synthesis(geometry.family, g_values)
    return complex(np.vdot(tg, tf))


def _invertible_resolution(psi: VectorFamily, phi: VectorFamily) -> ResolutionReport:
    report = resolution_operator(psi, phi)
    if not report.invertible:
        raise NotInvertibleError(
            f"resolution operator condition {report.condition:.3e} exceeds "
            f"{report.condition_threshold:.0e}"
        )
    return report


def range_kernel(psi: VectorFamily, phi: VectorFamily) -> KernelTable:
    """Mixed kernel whose integral operator fixes exactly the analysis images.

    The induced operator is an oblique projection: idempotent with range the
    analysis images of ``psi`` and null space the synthesis kernel of
    ``phi``.  Its table is in general not Hermitian; it coincides with the
    frame kernel when the two families are one frame.
    """
    report = _invertible_resolution(psi, phi)
    entries = psi.members.conj() @ report.inverse @ phi.members.T
    return KernelTable(space=psi.space, entries=entries)


def induced_kernel(psi: VectorFamily, phi: VectorFamily) -> KernelTable:
    """Reproducing kernel of the analysis range in the induced geometry.

    Section ``k_x = entries[x, :]`` reproduces point values through
    :func:`induced_inner` against the geometry of ``phi`` for every analysis
    image of ``psi``.  The table is the Gram of transported members, hence
    Hermitian and positive semidefinite.
    """
    report = _invertible_resolution(psi, phi)
    # adjoint-side resolution operator: analysis against phi, synthesis onto psi
    adjoint_inverse = np.linalg.inv(report.operator.conj().T)
    transported = adjoint_inverse @ psi.members.T
    entries = transported.T @ transported.conj()
    return KernelTable(
        space=psi.space, entries=entries, geometry=coefficient_geometry(phi)
    )


@dataclass(frozen=True, eq=False)
class FrameTransferReport:
    """Transfer of an ambient frame into the induced coefficient geometry.

    ``functions[i]`` is the analysis image of the i-th frame vector; the
    computed bounds are its frame bounds in the induced geometry, guaranteed
    to land inside ``[predicted_lower, predicted_upper]``.
    """

    functions: np.ndarray
    lower: float
    upper: float
    predicted_lower: float
    predicted_upper: float


def frame_transfer(
    psi: VectorFamily,
    phi: VectorFamily,
    frame_vectors,
    frame_rtol: float = FRAME_RTOL,
) -> FrameTransferReport:
    """Push an ambient frame through analysis into the induced geometry.

    The transported system is a frame there, with bounds squeezed between the
    ambient bounds scaled by the extreme squared singular values of the
    resolution operator.
    """
    g = np.asarray(frame_vectors, dtype=np.complex128)
    if g.ndim != 2 or g.shape[1] != psi.dim:
        raise DimensionMismatchError(
            f"frame vectors must form a (count, {psi.dim}) table, got {g.shape}"
        )
    ambient_op = g.T @ g.conj()
    g_values, _ = numerics.hermitian_eig(ambient_op)
    g_lower, g_upper = float(max(g_values[0], 0.0)), float(g_values[-1])
    if g_lower <= frame_rtol * g_upper or g_upper == 0.0:
        raise NotAFrameError("supplied vectors do not frame the ambient space")
    report = _invertible_resolution(psi, phi)
    functions = g @ psi.members.conj().T
    transported = report.operator @ g.T
    transfer_op = transported @ transported.conj().T
    t_values, _ = numerics.hermitian_eig(transfer_op)
    sing = numerics.singular_values(report.operator)
    return FrameTransferReport(
        functions=functions,
        lower=float(max(t_values[0], 0.0)),
        upper=float(t_values[-1]),
        predicted_lower=g_lower * float(sing[-1]) ** 2,
        predicted_upper=g_upper * float(sing[0]) ** 2,
    )


def lower_semiframe_dual(
    psi: VectorFamily, rank_policy: numerics.RankPolicy | None = None
) -> VectorFamily:
    """Dual family built from the bounded left inverse of analysis.

    Requires an injective analysis map.  The dual is assembled from the
    minimal-norm left inverse in the weighted coordinates, which makes the
    mixed resolution operator of (``psi``, dual) the identity and caps the
    dual's Bessel constant by the squared operator norm of that inverse.
    """
    w = psi.space.weights
    sqrt_w = np.sqrt(w)
    weighted_analysis = sqrt_w[:, None] * psi.members.conj()
    if numerics.rank(weighted_analysis, rank_policy) < psi.dim:
        raise NotInjectiveError("analysis map is rank deficient")
    left_inverse = numerics.pinv(weighted_analysis, rank_policy)
    # projecting onto the analysis range is a no-op for the minimal-norm inverse
    dual_members = left_inverse.T / sqrt_w[:, None]
    return VectorFamily(space=psi.space, members=dual_members)


def reproducing_partner(
    phi: VectorFamily, rank_policy: numerics.RankPolicy | None = None
) -> VectorFamily:
    """Partner family turning ``phi`` into a reproducing pair.

    Requires the weighted synthesis map of ``phi`` to be surjective.  Each
    ambient basis vector is pulled back to its minimal-norm coefficient
    preimage; conjugating those preimages row by row yields the partner, and
    the minimal-norm choice makes the pair's resolution operator exactly the
    identity.  The per-node squared sums of the preimages equal the squared
    row norms of the returned members.
    """
    w = phi.space.weights
    sqrt_w = np.sqrt(w)
    weighted_synthesis = phi.members.T * sqrt_w[None, :]
    if numerics.rank(weighted_synthesis, rank_policy) < phi.dim:
        raise NotSurjectiveError("synthesis map does not reach the ambient space")
    preimages = numerics.pinv(weighted_synthesis, rank_policy) / sqrt_w[:, None]
    return VectorFamily(space=phi.space, members=preimages.conj())


def partner_pointwise_sums(partner: VectorFamily) -> np.ndarray:
    """Per-node squared sums of the coefficient preimages behind a partner."""
    return np.sum(np.abs(partner.members) ** 2, axis=1)


def bessel_bound(family: VectorFamily) -> float:
    """Largest eigenvalue of the frame operator: the optimal Bessel constant."""
    values, _ = numerics.hermitian_eig(frame_operator(family))
    return float(values[-1])


def pair_verdict(
    psi: VectorFamily,
    phi: VectorFamily,
    condition_threshold: float = CONDITION_THRESHOLD,
) -> dict:
    """One-shot reproducing-pair check, shaped for report serialization."""
    report = resolution_operator(psi, phi, condition_threshold)
    swapped = resolution_operator(phi, psi, condition_threshold)
    adjoint_gap = float(np.max(np.abs(swapped.operator - report.operator.conj().T)))
    verdict = {
        "reproducing_pair": report.invertible,
        "resolution": report.to_json(),
        "adjoint_identity_gap": adjoint_gap,
        "redundancy_psi": pair_redundancy(psi),
        "redundancy_phi": pair_redundancy(phi),
    }
    if report.invertible:
        identity_gap = report.operator @ report.inverse - np.eye(psi.dim)
        verdict["inverse_residual"] = float(np.max(np.abs(identity_gap)))
    return verdict
