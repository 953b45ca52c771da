"""Vector families over discretized measure spaces and their operator calculus.

A family is an ``n x d`` table whose j-th row is the member attached to the
j-th node, expressed in a fixed orthonormal basis of the ambient space.  The
inner product convention everywhere is linear in the first slot and
conjugate-linear in the second, so ``analysis(family, f)[j] = <f, row_j>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import numerics
from .errors import (
    DimensionMismatchError,
    NotAFrameError,
    ValidationError,
)
from .measure import DiscretizedSpace, Provenance
from .rkhs import KernelTable

FRAME_RTOL = 1e-8
ROW_MATCH_TOL = 1e-12
TREND_VANISH_RATIO = 0.5
TREND_GROWTH_RATIO = 2.0


@dataclass(frozen=True, eq=False)
class VectorFamily:
    """A measurable vector map restricted to the nodes of a space."""

    space: DiscretizedSpace
    members: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.members, dtype=np.complex128)
        if m.ndim != 2:
            raise ValidationError(f"members must be a 2-d table, got ndim={m.ndim}")
        if m.shape[0] != self.space.size:
            raise ValidationError(
                f"member rows ({m.shape[0]}) must match node count ({self.space.size})"
            )
        if m.shape[1] < 1:
            raise ValidationError("ambient dimension must be at least 1")
        if not np.all(np.isfinite(m)):
            raise ValidationError("member entries must be finite")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "members", m)

    @property
    def size(self) -> int:
        return self.members.shape[0]

    @property
    def dim(self) -> int:
        return self.members.shape[1]

    def scaled(self, factor: complex) -> "VectorFamily":
        return VectorFamily(space=self.space, members=factor * self.members)

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "dim": self.dim,
            "members": [[float(z.real), float(z.imag)] for z in self.members.ravel()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "VectorFamily":
        from .measure import DiscretizedSpace as _DS

        space = _DS.from_json(data["space"])
        flat = np.array(
            [complex(re, im) for re, im in data["members"]], dtype=np.complex128
        )
        if "dim" in data:
            dim = int(data["dim"])
        elif space.size and flat.size % space.size == 0:
            dim = flat.size // space.size
        else:
            raise ValidationError("cannot infer the ambient dimension from the payload")
        if space.size * dim != flat.size:
            raise ValidationError(
                f"member count {flat.size} does not factor as {space.size} x {dim}"
            )
        return cls(space=space, members=flat.reshape(space.size, dim))

    def profile_rows(self):
        """Yield ``(point, weight, squared_norm)`` rows for tabular export."""
        norms = np.sum(np.abs(self.members) ** 2, axis=1)
        for node, sq in zip(self.space.nodes, norms):
            yield node.point, node.weight, float(sq)


class Classification(Enum):
    FRAME = "frame"
    BESSEL_ONLY = "bessel-only"
    LOWER_ONLY = "lower-only"
    NEITHER = "neither"


@dataclass(frozen=True)
class FrameReport:
    """Spectral bounds, redundancy and classification of one family.

    ``redundancy`` counts the node excess over the rank of the member table;
    ``index`` is its negative.  ``degenerate_zero_redundancy`` marks the
    configuration where zero redundancy is reached on purely quadrature nodes
    with no repeated rows, which at finite resolution can only happen when the
    refinement is too coarse to separate the family from a discrete one.
    """

    lower: float
    upper: float
    redundancy: int
    index: int
    condition: float
    classification: Classification
    frame_tolerance: float
    degenerate_zero_redundancy: bool = False

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "redundancy": self.redundancy,
            "index": self.index,
            "condition": self.condition if np.isfinite(self.condition) else "infinite",
            "classification": self.classification.value,
            "frame_tolerance": self.frame_tolerance,
            "degenerate_zero_redundancy": self.degenerate_zero_redundancy,
        }


def _check_vector(family: VectorFamily, vector) -> np.ndarray:
    f = np.asarray(vector, dtype=np.complex128)
    if f.shape != (family.dim,):
        raise DimensionMismatchError(
            f"expected a length-{family.dim} vector, got shape {f.shape}"
        )
    return f


def analysis(family: VectorFamily, vector) -> np.ndarray:
    """Coefficient function ``x -> <f, member(x)>`` over the nodes."""
    f = _check_vector(family, vector)
    return family.members.conj() @ f


def synthesis(family: VectorFamily, values) -> np.ndarray:
    """Weighted superposition ``sum_j w_j F_j member(x_j)``.

    This is the adjoint of :func:`analysis` with respect to the weighted node
    pairing on coefficient functions.
    """
    coeffs = family.space.values(values)
    return family.members.T @ (family.space.weights * coeffs)


def analysis_matrix(family: VectorFamily) -> np.ndarray:
    """Matrix of :func:`analysis` acting on ambient vectors."""
    return family.members.conj().copy()


def frame_operator(family: VectorFamily) -> np.ndarray:
    """Weighted sum of rank-one member projectors: synthesis after analysis."""
    w = family.space.weights
    return family.members.T @ (w[:, None] * family.members.conj())


def frame_bounds(
    family: VectorFamily,
    rank_policy: numerics.RankPolicy | None = None,
    frame_rtol: float = FRAME_RTOL,
    absolute_lower: float | None = None,
    absolute_upper: float | None = None,
    row_tolerance: float = ROW_MATCH_TOL,
) -> FrameReport:
    """Spectral frame bounds and redundancy accounting.

    The bounds are the extreme eigenvalues of the frame operator.  Without
    absolute thresholds, the family is a frame when the lower bound clears
    ``frame_rtol`` times the upper one, otherwise only the (finite) upper
    inequality stands.  Explicit ``absolute_lower`` / ``absolute_upper``
    thresholds classify by which of the two inequalities fails against them;
    finite truncations of unbounded systems need those, or the trend
    utilities, to surface semi-frame behavior.
    """
    values, _ = numerics.hermitian_eig(frame_operator(family))
    lower = float(max(values[0], 0.0))
    upper = float(values[-1])
    r = numerics.rank(family.members, rank_policy)
    redundancy = family.size - r
    condition = upper / lower if lower > 0 else float("inf")
    if absolute_lower is None and absolute_upper is None:
        tolerance = frame_rtol * upper
        if lower > tolerance:
            classification = Classification.FRAME
        else:
            classification = Classification.BESSEL_ONLY
    else:
        tolerance = absolute_lower if absolute_lower is not None else frame_rtol * upper
        lower_fails = lower < tolerance
        upper_fails = absolute_upper is not None and upper > absolute_upper
        if not lower_fails and not upper_fails:
            classification = Classification.FRAME
        elif lower_fails and not upper_fails:
            classification = Classification.BESSEL_ONLY
        elif not lower_fails and upper_fails:
            classification = Classification.LOWER_ONLY
        else:
            classification = Classification.NEITHER
    all_cells = all(node.provenance is Provenance.CELL for node in family.space.nodes)
    degenerate = (
        redundancy == 0
        and all_cells
        and not _equal_row_groups(family, row_tolerance)
    )
    return FrameReport(
        lower=lower,
        upper=upper,
        redundancy=redundancy,
        index=r - family.size,
        condition=condition,
        classification=classification,
        frame_tolerance=float(tolerance),
        degenerate_zero_redundancy=degenerate,
    )


def canonical_dual(family: VectorFamily, frame_rtol: float = FRAME_RTOL) -> VectorFamily:
    """Family of inverse-frame-operator images, giving perfect reconstruction.

    Refuses with ``NotAFrameError`` when the lower bound sits below tolerance,
    since inverting the frame operator would amplify noise unboundedly.
    """
    s = frame_operator(family)
    values, _ = numerics.hermitian_eig(s)
    lower, upper = float(max(values[0], 0.0)), float(values[-1])
    if lower <= frame_rtol * upper or upper == 0.0:
        raise NotAFrameError(
            f"lower bound {lower:.3e} below tolerance {frame_rtol:.0e} * {upper:.3e}"
        )
    dual_members = np.linalg.solve(s, family.members.T).T
    return VectorFamily(space=family.space, members=dual_members)


def kernel_matrix(family: VectorFamily, frame_rtol: float = FRAME_RTOL) -> KernelTable:
    """Kernel ``K[x, y] = <S^-1 member(y), member(x)>`` of the analysis range.

    The induced integral operator (see :func:`kernel_project`) is the
    orthogonal projection, in the weighted node pairing, onto the space of
    analysis images.
    """
    s = frame_operator(family)
    values, _ = numerics.hermitian_eig(s)
    lower, upper = float(max(values[0], 0.0)), float(values[-1])
    if lower <= frame_rtol * upper or upper == 0.0:
        raise NotAFrameError(
            f"lower bound {lower:.3e} below tolerance {frame_rtol:.0e} * {upper:.3e}"
        )
    entries = family.members.conj() @ np.linalg.solve(s, family.members.T)
    return KernelTable(space=family.space, entries=entries)


def kernel_project(kernel: KernelTable, values) -> np.ndarray:
    """Apply the integral operator of a kernel table to a coefficient function."""
    return kernel.apply(values)


def _equal_row_groups(family: VectorFamily, row_tolerance: float) -> list[list[int]]:
    """Greedy grouping of quadrature nodes with entrywise-equal member rows.

    Only groups of two or more nodes are returned; each group is matched
    against its seed row with an absolute per-entry tolerance.
    """
    cell_indices = [
        j for j, node in enumerate(family.space.nodes) if node.provenance is Provenance.CELL
    ]
    used: set[int] = set()
    groups: list[list[int]] = []
    for pos, j in enumerate(cell_indices):
        if j in used:
            continue
        group = [j]
        seed = family.members[j]
        for k in cell_indices[pos + 1 :]:
            if k in used:
                continue
            if np.max(np.abs(family.members[k] - seed)) <= row_tolerance:
                group.append(k)
        if len(group) >= 2:
            groups.append(group)
            used.update(group)
    return groups


def split(
    family: VectorFamily, row_tolerance: float = ROW_MATCH_TOL
) -> tuple[list[np.ndarray], VectorFamily]:
    """Separate the discrete content of a family from its continuous rest.

    Every atom node collapses to the single vector ``sqrt(w) * member``; any
    group of quadrature nodes sharing one member row (entrywise within
    ``row_tolerance``) merges into the mass-weighted mean row scaled by the
    square root of the group weight.  Remaining quadrature nodes form the
    strictly continuous part.  The weighted coefficient energy of the input
    splits exactly into the discrete squared pairings plus the energy of the
    continuous part.
    """
    if row_tolerance < 0:
        raise ValidationError("row_tolerance must be nonnegative")
    discrete: list[np.ndarray] = []
    removed: set[int] = set()
    for j, node in enumerate(family.space.nodes):
        if node.provenance is Provenance.ATOM:
            discrete.append(np.sqrt(node.weight) * family.members[j])
            removed.add(j)
    w = family.space.weights
    for group in _equal_row_groups(family, row_tolerance):
        total = float(np.sum(w[list(group)]))
        mean = np.zeros(family.dim, dtype=np.complex128)
        for j in group:
            mean += w[j] * family.members[j]
        discrete.append(mean / np.sqrt(total))
        removed.update(group)
    keep = [j for j in range(family.size) if j not in removed]
    continuous_space = DiscretizedSpace(nodes=tuple(family.space.nodes[j] for j in keep))
    continuous = VectorFamily(
        space=continuous_space, members=family.members[keep, :].reshape(len(keep), family.dim)
    )
    return discrete, continuous


def semiframe_trend(
    builder: Callable[[int], VectorFamily], sizes: Sequence[int]
) -> list[tuple[int, float, float]]:
    """Frame bounds across a sequence of truncation sizes.

    Finite truncations always carry positive bounds; semi-frame behavior of
    the underlying unbounded system shows up as the lower bound draining to
    zero or the upper bound growing without limit along the sequence, which
    :func:`classify_trend` turns into a verdict.
    """
    results = []
    for size in sizes:
        report = frame_bounds(builder(size))
        results.append((int(size), report.lower, report.upper))
    return results


def classify_trend(
    trend: Sequence[tuple[int, float, float]],
    vanish_ratio: float = TREND_VANISH_RATIO,
    growth_ratio: float = TREND_GROWTH_RATIO,
) -> Classification:
    """Asymptotic classification from a bound trend.

    The lower bound is considered vanishing when its last value drops below
    ``vanish_ratio`` times its first; the upper bound diverging when its last
    value exceeds ``growth_ratio`` times its first.
    """
    if len(trend) < 2:
        raise ValidationError("a trend needs at least two sizes")
    first_lower, last_lower = trend[0][1], trend[-1][1]
    first_upper, last_upper = trend[0][2], trend[-1][2]
    vanishing = last_lower < vanish_ratio * first_lower
    diverging = last_upper > growth_ratio * first_upper
    if vanishing and diverging:
        return Classification.NEITHER
    if vanishing:
        return Classification.BESSEL_ONLY
    if diverging:
        return Classification.LOWER_ONLY
    return Classification.FRAME
