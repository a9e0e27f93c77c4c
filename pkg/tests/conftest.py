import math

import pytest

PI = math.pi


@pytest.fixture(scope="session")
def case_a_run():
    from linefield.montecarlo import SimulationConfig, run
    from linefield.sampling import CONSTANT_FULL, ThreeRandom

    return run(SimulationConfig(ThreeRandom(CONSTANT_FULL), 10**6, 7, retain_samples=True))
