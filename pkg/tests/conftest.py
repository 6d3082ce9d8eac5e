import functools

import pytest

from endscope.gallery import make
from endscope.graph import explore


@functools.lru_cache(maxsize=None)
def gallery(spec: str):
    return make(spec)


@functools.lru_cache(maxsize=None)
def window(spec: str, radius: int, max_vertices: int | None = 4000):
    return explore(gallery(spec).graph, radius, max_vertices=max_vertices)


@pytest.fixture
def ladder():
    return make("ladder")
