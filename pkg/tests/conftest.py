import numpy as np
import pytest

from pulseopt import Budget, DeviceParams


@pytest.fixture
def params() -> DeviceParams:
    return DeviceParams()


def random_duration_instance(rng: np.random.Generator, params: DeviceParams):
    """A (currents, budget) pair for the fixed-currents subproblem."""
    bits = int(rng.integers(1, 9))
    currents = rng.uniform(1.2, 3.5, bits)
    budget = Budget(float(rng.uniform(2.0, 40.0 * bits)))
    return currents, budget


def random_current_instance(rng: np.random.Generator, params: DeviceParams):
    """A (durations, budget) pair for the fixed-durations subproblem.

    Durations include zeros with some probability; the budget always leaves
    slack above the floor-current energy so the subproblem is feasible.
    """
    bits = int(rng.integers(1, 9))
    durations = rng.uniform(0.2, 8.0, bits) * (rng.random(bits) > 0.2)
    floor_energy = params.current_floor**2 * durations.sum()
    budget = Budget(float(floor_energy * rng.uniform(1.3, 4.0) + 1.0))
    return durations, budget
