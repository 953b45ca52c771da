"""Ready-made example families, parameterized for truncation experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidSpecError
from .frames import VectorFamily
from .measure import (
    Density,
    DiscretizedSpace,
    MeasureSpace,
    Node,
    Provenance,
    Segment,
    counting_space,
    discretize,
    unit_segment_space,
)

AFFINE_TAIL_FRACTION = 1e-8


class GalleryKind(Enum):
    TORUS = "torus"
    AFFINE = "affine"
    DELTA = "delta"
    DOUBLED_ONB = "doubled-onb"
    AUGMENTED_ONB = "augmented-onb"
    MERCEDES = "mercedes"
    RANDOM = "random"


@dataclass(frozen=True)
class GallerySpec:
    """Parameter bundle for one gallery construction.

    ``dim`` is the truncation size (ambient dimension or cell count depending
    on the kind), ``grid`` the node count of the underlying space, ``rows``
    the member count for random families, ``power`` the exponent parameter of
    the radial weight used by the affine construction.
    """

    kind: GalleryKind
    dim: int | None = None
    grid: int | None = None
    rows: int | None = None
    seed: int | None = None
    power: int = 1

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "dim": self.dim,
            "grid": self.grid,
            "rows": self.rows,
            "seed": self.seed,
            "power": self.power,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GallerySpec":
        return cls(
            kind=GalleryKind(data["kind"]),
            dim=data.get("dim"),
            grid=data.get("grid"),
            rows=data.get("rows"),
            seed=data.get("seed"),
            power=data.get("power", 1),
        )


def frequency_enumeration(count: int) -> list[int]:
    """Integer frequencies ordered 0, 1, -1, 2, -2, ... truncated to ``count``."""
    out = [0]
    step = 1
    while len(out) < count:
        out.append(step)
        if len(out) < count:
            out.append(-step)
        step += 1
    return out[:count]


def build_torus(dim: int, grid: int) -> VectorFamily:
    """Exponential family on the unit circle with harmonically decaying weights.

    Member component i at node x is ``exp(2 pi I x n_i) / (i + 1)`` with the
    frequencies enumerated 0, 1, -1, 2, -2, ...  On a uniform grid finer than
    twice the largest frequency the grid exponentials stay exactly
    orthonormal, so the frame operator is diagonal with entries
    ``1, 1/4, 1/9, ...``: the upper bound is 1 and the lower bound ``1/dim**2``
    drains to zero under truncation growth.
    """
    if dim < 1:
        raise InvalidSpecError("torus family needs dim >= 1")
    freqs = np.array(frequency_enumeration(dim))
    if grid <= 2 * int(np.max(np.abs(freqs))):
        raise InvalidSpecError(
            f"grid {grid} too coarse for frequencies up to {int(np.max(np.abs(freqs)))}"
        )
    space = unit_segment_space(grid)
    points = np.array([node.point for node in space.nodes], dtype=float)
    coefficients = 1.0 / (np.arange(dim) + 1.0)
    members = coefficients[None, :] * np.exp(2j * np.pi * np.outer(points, freqs))
    return VectorFamily(space=space, members=members)


def _exp_tail_cut(power: int, fraction: float = AFFINE_TAIL_FRACTION) -> float:
    """Radius beyond which the squared-exponential radial mass falls under ``fraction``.

    For integer ``power`` the normalized upper tail of ``r**(power-1) e^{-2r}``
    has the closed form ``e^{-2R} sum_{m<power} (2R)^m / m!``; the cut is found
    by bisection.
    """
    def tail(radius: float) -> float:
        x = 2.0 * radius
        return math.exp(-x) * sum(x**m / math.factorial(m) for m in range(power))

    lo, hi = 0.0, 60.0 + 10.0 * power
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if tail(mid) > fraction:
            lo = mid
        else:
            hi = mid
    return hi


def build_affine(
    cells: int,
    grid: int | None = None,
    power: int = 1,
    profile: Callable[[np.ndarray], np.ndarray] | None = None,
    upper_limit: float | None = None,
) -> VectorFamily:
    """Modulated-profile family over a frequency grid.

    The ambient space is the radial half line with weight ``r**(power-1)``,
    truncated where the default profile's energy tail drops below 1e-8 of the
    total and embedded into coordinates through square-root weights.  Members
    are pure modulations of the profile sampled on a frequency window matched
    to the radial spacing, so the frame operator approaches multiplication by
    ``r**(power-1) |profile(r)|**2``; for ``power == 1`` the match is exact up
    to roundoff.
    """
    if cells < 1:
        raise InvalidSpecError("affine family needs cells >= 1")
    if power < 1:
        raise InvalidSpecError("affine family needs integer power >= 1")
    if grid is None:
        grid = cells
    if grid < cells:
        raise InvalidSpecError("frequency grid must be at least as fine as the radial grid")
    if profile is None:
        profile = _default_profile
        if upper_limit is None:
            upper_limit = _exp_tail_cut(power)
    elif upper_limit is None:
        raise InvalidSpecError("custom profiles need an explicit upper_limit")
    radial_space = affine_radial_space(cells, power, upper_limit)
    radii = np.array([node.point for node in radial_space.nodes], dtype=float)
    radial_weights = radial_space.weights
    spacing = upper_limit / cells
    extent = 1.0 / spacing
    frequency_space = discretize(
        MeasureSpace(segments=(Segment(0.0, extent, Density("const", 1.0)),)), grid
    )
    freqs = np.array([node.point for node in frequency_space.nodes], dtype=float)
    members = (
        np.sqrt(radial_weights)[None, :]
        * profile(radii)[None, :]
        * np.exp(-2j * np.pi * np.outer(freqs, radii))
    )
    return VectorFamily(space=frequency_space, members=members)


def _default_profile(r: np.ndarray) -> np.ndarray:
    return np.exp(-r)


def affine_radial_space(cells: int, power: int, upper_limit: float) -> DiscretizedSpace:
    """Equal-width radial grid carrying the mass of ``r**(power-1)`` per cell.

    Uniform spacing (rather than the equal-mass cells of
    :func:`framelab.measure.discretize`) is what lets a matched frequency
    window resolve the radial nodes independently, turning the frame operator
    into a multiplier; each node still carries the exact mass of its cell.
    """
    density = Density("power", 1.0, float(power))
    width = upper_limit / cells
    nodes = []
    for i in range(cells):
        left = i * width
        right = (i + 1) * width if i < cells - 1 else upper_limit
        nodes.append(
            Node(
                point=(left + right) / 2.0,
                weight=density.mass(left, right),
                provenance=Provenance.CELL,
            )
        )
    return DiscretizedSpace(nodes=tuple(nodes))


def affine_symbol(
    cells: int,
    power: int = 1,
    profile: Callable[[np.ndarray], np.ndarray] | None = None,
    upper_limit: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Radial midpoints and the multiplier symbol ``r**(power-1) |profile(r)|**2``.

    The frame operator of the matching affine family is approximately (for
    ``power == 1`` exactly) diagonal with this symbol on the diagonal.
    """
    if profile is None:
        profile = _default_profile
        if upper_limit is None:
            upper_limit = _exp_tail_cut(power)
    elif upper_limit is None:
        raise InvalidSpecError("custom profiles need an explicit upper_limit")
    radial_space = affine_radial_space(cells, power, upper_limit)
    radii = np.array([node.point for node in radial_space.nodes], dtype=float)
    symbol = radii ** (power - 1) * np.abs(profile(radii)) ** 2
    return radii, symbol


def build_delta(count: int) -> VectorFamily:
    """Scaled canonical vectors over a counting space.

    Coordinate k (1-based) carries amplitude ``sqrt(k)`` when k is even and
    ``1/sqrt(k)`` when odd, so the squared column sums alternate between k and
    1/k: every pointwise sum is finite while the spectral bounds run apart
    linearly under truncation growth.
    """
    if count < 1:
        raise InvalidSpecError("delta family needs count >= 1")
    space = counting_space(count)
    members = np.zeros((count, count), dtype=np.complex128)
    for k in range(1, count + 1):
        amplitude = math.sqrt(k) if k % 2 == 0 else 1.0 / math.sqrt(k)
        members[k - 1, k - 1] = amplitude
    return VectorFamily(space=space, members=members)


def build_doubled_onb(dim: int) -> VectorFamily:
    """Each canonical basis vector listed twice, adjacent duplicates."""
    if dim < 1:
        raise InvalidSpecError("doubled basis needs dim >= 1")
    space = counting_space(2 * dim)
    eye = np.eye(dim, dtype=np.complex128)
    members = np.repeat(eye, 2, axis=0)
    return VectorFamily(space=space, members=members)


def build_augmented_onb(dim: int) -> VectorFamily:
    """Canonical basis with the first vector repeated once."""
    if dim < 1:
        raise InvalidSpecError("augmented basis needs dim >= 1")
    space = counting_space(dim + 1)
    eye = np.eye(dim, dtype=np.complex128)
    members = np.vstack([eye[:1], eye])
    return VectorFamily(space=space, members=members)


def build_mercedes() -> VectorFamily:
    """Three unit vectors in the plane at equal angles: the tightest 3-vector frame."""
    space = counting_space(3)
    members = np.array(
        [
            [1.0, 0.0],
            [-0.5, math.sqrt(3.0) / 2.0],
            [-0.5, -math.sqrt(3.0) / 2.0],
        ],
        dtype=np.complex128,
    )
    return VectorFamily(space=space, members=members)


def build_random(rows: int, dim: int, seed) -> VectorFamily:
    """Standard complex Gaussian members over a counting space; seeded."""
    if rows < 1 or dim < 1:
        raise InvalidSpecError("random family needs rows >= 1 and dim >= 1")
    if seed is None:
        raise InvalidSpecError("random family needs an explicit seed")
    rng = np.random.default_rng(seed)
    members = (
        rng.standard_normal((rows, dim)) + 1j * rng.standard_normal((rows, dim))
    ) / math.sqrt(2.0)
    space = counting_space(rows)
    return VectorFamily(space=space, members=members)


def build(spec: GallerySpec) -> VectorFamily:
    """Construct the family described by ``spec``."""
    kind = spec.kind
    if kind is GalleryKind.TORUS:
        if spec.dim is None or spec.grid is None:
            raise InvalidSpecError("torus spec needs dim and grid")
        return build_torus(spec.dim, spec.grid)
    if kind is GalleryKind.AFFINE:
        if spec.dim is None:
            raise InvalidSpecError("affine spec needs dim (radial cell count)")
        return build_affine(spec.dim, spec.grid, spec.power)
    if kind is GalleryKind.DELTA:
        if spec.dim is None:
            raise InvalidSpecError("delta spec needs dim")
        return build_delta(spec.dim)
    if kind is GalleryKind.DOUBLED_ONB:
        if spec.dim is None:
            raise InvalidSpecError("doubled-onb spec needs dim")
        return build_doubled_onb(spec.dim)
    if kind is GalleryKind.AUGMENTED_ONB:
        if spec.dim is None:
            raise InvalidSpecError("augmented-onb spec needs dim")
        return build_augmented_onb(spec.dim)
    if kind is GalleryKind.MERCEDES:
        return build_mercedes()
    if kind is GalleryKind.RANDOM:
        if spec.rows is None or spec.dim is None:
            raise InvalidSpecError("random spec needs rows and dim")
        return build_random(spec.rows, spec.dim, spec.seed)
    raise InvalidSpecError(f"unknown gallery kind {kind!r}")


def truncation_sequence(
    spec: GallerySpec, sizes: Sequence[int]
) -> Callable[[int], VectorFamily]:
    """Size-indexed builder for bound-trend experiments.

    The returned callable is deterministic: identical specs and sizes always
    produce identical families.  The torus keeps its grid matched at four
    nodes per frequency slot; random families derive one child seed per size.
    """
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise InvalidSpecError("trend sizes must be ascending")
    if any(s < 1 for s in sizes):
        raise InvalidSpecError("trend sizes must be positive")
    kind = spec.kind

    if kind is GalleryKind.TORUS:
        return lambda size: build_torus(size, 4 * size)
    if kind is GalleryKind.DELTA:
        return lambda size: build_delta(size)
    if kind is GalleryKind.DOUBLED_ONB:
        return lambda size: build_doubled_onb(size)
    if kind is GalleryKind.AUGMENTED_ONB:
        return lambda size: build_augmented_onb(size)
    if kind is GalleryKind.AFFINE:
        return lambda size: build_affine(size, None, spec.power)
    if kind is GalleryKind.RANDOM:
        if spec.dim is None:
            raise InvalidSpecError("random trend needs dim")
        if spec.seed is None:
            raise InvalidSpecError("random trend needs a seed")
        return lambda size: build_random(size, spec.dim, [spec.seed, size])
    raise InvalidSpecError(f"gallery kind {kind.value} is not size-parameterized")
