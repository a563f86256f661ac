"""Pytest configuration and shared fixtures.

Patches and solved fields are built at coarse resolutions and cached per session; every test
treats them as read-only.
"""

import os
from typing import Callable, Dict, Tuple

import numpy as np
import pytest
from hypothesis import settings

from spinform.configs import load_scene
from spinform.geometry.patch import DiscretePatch, build_patch
from spinform.geometry.scenes import Scene
from spinform.killing.solver import SpinorField, solve_killing

COARSE = 9
MEDIUM = 17

settings.register_profile("default", max_examples=40, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def scene_factory() -> Callable[[str, int], Scene]:
    """Catalog scenes by name and resolution."""

    def make(name: str, resolution: int = MEDIUM) -> Scene:
        return load_scene(name, resolution=resolution)

    return make


@pytest.fixture(scope="session")
def patch_factory(scene_factory) -> Callable[[str, int], DiscretePatch]:
    """Cached patches of catalog scenes."""
    cache: Dict[Tuple[str, int], DiscretePatch] = {}

    def make(name: str, resolution: int = MEDIUM) -> DiscretePatch:
        key = (name, resolution)
        if key not in cache:
            cache[key] = build_patch(scene_factory(name, resolution))
        return cache[key]

    return make


@pytest.fixture(scope="session")
def field_factory(patch_factory) -> Callable[[str, int], SpinorField]:
    """Cached Killing fields of catalog scenes, solved from the grid center."""
    cache: Dict[Tuple[str, int], SpinorField] = {}

    def make(name: str, resolution: int = MEDIUM) -> SpinorField:
        key = (name, resolution)
        if key not in cache:
            cache[key] = solve_killing(patch_factory(name, resolution))
        return cache[key]

    return make


@pytest.fixture
def flat_field(field_factory) -> SpinorField:
    return field_factory("flat_plane", COARSE)


@pytest.fixture
def sphere_field(field_factory) -> SpinorField:
    return field_factory("round_sphere", MEDIUM)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)
