"""Scene catalog and default settings.

Usage:
    from spinform.configs import load_scene, list_scenes

    # List catalog scenes
    names = list_scenes()

    # Build a catalog scene, or one described in a JSON/YAML file
    scene = load_scene("round_sphere")
    scene = load_scene("my_scene.yaml", resolution=65)
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from spinform.core.base import ToleranceGate
from spinform.core.exceptions import SceneError
from spinform.geometry.scenes import Scene

CONFIGS_DIR = Path(__file__).parent
SCENES_DIR = CONFIGS_DIR / "scenes"
SCENE_FILE_SUFFIXES = (".yaml", ".yml", ".json")


def load_base_config() -> Dict[str, Any]:
    """Load the defaults shared by every scene.

    Returns
    -------
    Dict[str, Any]
        Base configuration dictionary.
    """
    base_path = CONFIGS_DIR / "base.yaml"
    if not base_path.exists():
        return {}

    with open(base_path, "r") as f:
        return yaml.safe_load(f) or {}


def load_scene_config(name: str) -> Dict[str, Any]:
    """Load a catalog scene merged over the base configuration.

    Parameters
    ----------
    name : str
        Scene name (without .yaml extension).

    Returns
    -------
    Dict[str, Any]
        Merged configuration dictionary.

    Raises
    ------
    FileNotFoundError
        If the scene is not in the catalog.
    """
    scene_path = SCENES_DIR / f"{name}.yaml"
    if not scene_path.exists():
        raise FileNotFoundError(f"Scene not found: {scene_path}")

    with open(scene_path, "r") as f:
        scene = yaml.safe_load(f) or {}

    return _deep_merge(load_base_config(), scene)


def load_scene_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Load a JSON or YAML scene description merged over the base configuration.

    Raises
    ------
    FileNotFoundError
        If the file does not exist.
    SceneError
        If the file cannot be parsed or does not hold a mapping.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Scene file not found: {path}")
    try:
        with open(path, "r") as f:
            data = json.load(f) if path.suffix == ".json" else yaml.safe_load(f)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise SceneError(f"Cannot parse scene file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SceneError(f"Scene file {path} does not describe a mapping")
    return _deep_merge(load_base_config(), data)


def list_scenes() -> List[str]:
    """List catalog scenes.

    Returns
    -------
    List[str]
        Sorted scene names.
    """
    if not SCENES_DIR.exists():
        return []
    return sorted(f.stem for f in SCENES_DIR.glob("*.yaml"))


def is_scene_file(name: str) -> bool:
    """Whether ``name`` refers to a scene file rather than a catalog entry."""
    return Path(name).suffix in SCENE_FILE_SUFFIXES or Path(name).is_file()


def scene_config(name: str) -> Dict[str, Any]:
    """Merged configuration of a catalog name or scene-file path."""
    return load_scene_file(name) if is_scene_file(name) else load_scene_config(name)


def load_scene(name: str, resolution: Optional[int] = None) -> Scene:
    """Build a scene from a catalog name or a scene-file path.

    Raises
    ------
    FileNotFoundError
        For unknown names or missing files.
    SceneError
        For malformed descriptions.
    """
    scene = Scene.from_config(scene_config(name))
    return scene if resolution is None else scene.with_resolution(resolution)


def default_gate(config: Dict[str, Any]) -> ToleranceGate:
    """Gate applied to residuals without an override."""
    return ToleranceGate.from_dict(config.get("default_gate") or {})


def _deep_merge(base: Dict, override: Dict) -> Dict:
    """Deep merge two dictionaries.

    Parameters
    ----------
    base : Dict
        Base dictionary.
    override : Dict
        Override dictionary (values take precedence).

    Returns
    -------
    Dict
        Merged dictionary.
    """
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value
    return result


__all__ = [
    "load_base_config",
    "load_scene_config",
    "load_scene_file",
    "list_scenes",
    "is_scene_file",
    "scene_config",
    "load_scene",
    "default_gate",
    "CONFIGS_DIR",
    "SCENES_DIR",
]
