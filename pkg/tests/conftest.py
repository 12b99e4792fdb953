"""Shared surface fixtures.

Surfaces are expensive to build (polygon verification, collar construction)
and immutable afterwards, so they are session-scoped.  Tests must not mutate
them; anything stateful (deck-ball caches, curve caches) only grows
monotonically and is safe to share.
"""

import pytest

from surfclass.surfaces import (
    four_punctured_sphere,
    genus_two_closed,
    once_punctured_torus,
    one_holed_torus,
    pants_surface,
    thrice_punctured_sphere,
)


@pytest.fixture(scope="session")
def torus():
    return once_punctured_torus()


@pytest.fixture(scope="session")
def torus_alt():
    return once_punctured_torus(2.5, 0.7)


@pytest.fixture(scope="session")
def sphere3():
    return thrice_punctured_sphere()


@pytest.fixture(scope="session")
def sphere4():
    return four_punctured_sphere()


@pytest.fixture(scope="session")
def genus2():
    return genus_two_closed()


@pytest.fixture(scope="session")
def holed():
    return one_holed_torus()


@pytest.fixture(scope="session")
def pants():
    return pants_surface((2.0, 2.5, 3.0))
