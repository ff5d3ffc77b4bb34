"""Test :func:`bicap.utils.power_iteration`."""

import jax.numpy as jnp
import pytest

from bicap.utils import parallel_map, power_iteration


class TestPowerIteration:
    def test_symmetric_matrix(self) -> None:
        a = jnp.array([[2.0, 1.0], [1.0, 2.0]])
        out = power_iteration(lambda v: a @ v, jnp.array([1.0, 0.0]))
        assert out.converged
        assert out.eigenvalue == pytest.approx(3.0, rel=1e-8)
        assert jnp.allclose(jnp.abs(out.vector), 2**-0.5, atol=1e-4)

    def test_zero_start(self) -> None:
        out = power_iteration(lambda v: v, jnp.zeros(3))
        assert out.eigenvalue == 0.0
        assert out.iterations == 0

    def test_iteration_cap(self) -> None:
        a = jnp.diag(jnp.array([1.0, 0.999]))
        out = power_iteration(lambda v: a @ v, jnp.ones(2), tol=1e-15, max_iters=3)
        assert out.iterations == 3
        assert not out.converged


@pytest.mark.parametrize("max_workers", [None, 1, 3])
def test_parallel_map_keeps_order(max_workers: int | None) -> None:
    assert parallel_map(lambda x: -x, range(10), max_workers=max_workers) == [-x for x in range(10)]
