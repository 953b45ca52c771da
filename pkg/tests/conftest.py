import numpy as np
import pytest

from framelab import DiscretizedSpace, Node, Provenance, VectorFamily


def complex_rng_matrix(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def unit_weight_space(count):
    nodes = tuple(
        Node(point=float(i), weight=1.0, provenance=Provenance.ATOM) for i in range(count)
    )
    return DiscretizedSpace(nodes=nodes)


def cell_space(weights):
    nodes = tuple(
        Node(point=float(i), weight=float(w), provenance=Provenance.CELL)
        for i, w in enumerate(weights)
    )
    return DiscretizedSpace(nodes=nodes)


def random_family(rng, rows, cols, weighted=False):
    """Generic full-rank family; optionally over a random-weight cell space."""
    if weighted:
        space = cell_space(rng.uniform(0.25, 2.5, size=rows))
    else:
        space = unit_weight_space(rows)
    return VectorFamily(space=space, members=complex_rng_matrix(rng, rows, cols))


def onb_family(dim):
    return VectorFamily(space=unit_weight_space(dim), members=np.eye(dim, dtype=complex))


def random_unit_vector(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
