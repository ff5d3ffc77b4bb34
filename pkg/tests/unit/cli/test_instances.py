"""Test the seeded instance generators."""

import pytest

from bicap.bitree import TreeShape
from bicap.cli._src import instances as inst
from bicap.potential import superharmonic_check


@pytest.mark.parametrize("index", [0, 3])
def test_generators_are_seeded(index: int) -> None:
    a = inst.random_leaf_set(inst.instance_key(7, index), 4)
    b = inst.random_leaf_set(inst.instance_key(7, index), 4)
    assert a.nodes == b.nodes


def test_leaf_set() -> None:
    leaves = inst.random_leaf_set(inst.instance_key(1, 0), 5, max_size=4)
    assert 1 <= len(leaves) <= 4
    assert all(n.level == 5 for n in leaves)


def test_box_union_is_a_boundary_set() -> None:
    boxes = inst.random_box_union(inst.instance_key(1, 1), 3)
    assert boxes.kind == "boundary"
    assert all(n.x.level <= 3 and n.y.level <= 3 for n in boxes)


def test_boundary_measure() -> None:
    mu = inst.random_boundary_measure(inst.instance_key(2, 0), 3, total=2.0)
    assert mu.total() == pytest.approx(2.0)
    assert all(n.x.level == n.y.level == 3 for n in mu)


def test_deep_node_position() -> None:
    node = inst.random_node1(inst.instance_key(0, 0), 100, level=100)
    assert node.level == 100
    assert 0 <= node.pos < 1 << 100


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_superharmonic(seed: int) -> None:
    f = inst.random_superharmonic(inst.instance_key(seed, 0), 5)
    assert f.shape == TreeShape(5, ndim=1)
    assert superharmonic_check(f)


def test_random_measure_shape() -> None:
    shape = TreeShape(3, ndim=1)
    mu = inst.random_measure(inst.instance_key(0, 2), shape, count=5)
    assert mu.shape == shape
    assert 0 < mu.total() <= 5
