import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ahmp.model import Configuration, JointLimits, KinematicChain
from ahmp.roadmap import BuildParams, build_prm
from ahmp.world import Box, Environment, Sphere


@pytest.fixture(scope="session")
def chain():
    return KinematicChain(link_lengths=np.array([0.5, 0.4, 0.3, 0.2]),
                          mount_offset=np.array([1.0, 1.5, 0.5]))


@pytest.fixture(scope="session")
def limits():
    return JointLimits(np.array([0.0, -3.1, -2.2, -2.2, -2.2]),
                       np.array([1.5, 3.1, 2.2, 2.2, 2.2]))


@pytest.fixture(scope="session")
def env():
    return Environment(np.zeros(3), np.array([3.5, 3.0, 2.5]),
                       (Box(np.array([1.6, 1.0, 0.6]), np.array([2.0, 1.4, 1.6])),
                        Sphere(np.array([0.7, 2.1, 1.1]), 0.25)))


@pytest.fixture(scope="session")
def empty_env():
    return Environment(np.zeros(3), np.array([3.5, 3.0, 2.5]))


@pytest.fixture(scope="session")
def small_roadmap(env, chain, limits):
    """300-node roadmap shared by read-only tests; copy before mutating."""
    return build_prm(env, chain, limits, BuildParams(300, 42))
