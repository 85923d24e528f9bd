"""Named model presets shipped as package data, and model files on disk."""

import json
import logging
import os
from typing import Dict, List

from pydantic import ValidationError

from ..errors import ConfigurationError
from ..settings import default_presets_path
from .base import StochasticModel, build_model
from .configs import ModelFile

logger = logging.getLogger(__name__)


def _load_presets(json_path: str = default_presets_path) -> Dict[str, dict]:
    presets_path = os.path.join(os.path.dirname(__file__), json_path)
    with open(presets_path) as json_data:
        return json.load(json_data)


def available_presets() -> List[str]:
    return sorted(_load_presets())


def preset_file(name: str) -> ModelFile:
    presets = _load_presets()
    if name not in presets:
        raise ConfigurationError(f"Unknown preset '{name}', choose one of {sorted(presets)}")
    return ModelFile.from_input(presets[name])


def load_model_file(path: str) -> ModelFile:
    try:
        return ModelFile.from_json_file(path)
    except (OSError, json.JSONDecodeError) as error:
        raise ConfigurationError(f"Cannot read model file {path}: {error}") from error
    except ValidationError as error:
        raise ConfigurationError(f"Invalid model file {path}: {error}") from error


def model_from_file(model_file: ModelFile, **injected) -> StochasticModel:
    section, config = model_file.section
    logger.debug(f"building {section} model")
    return build_model(section, config, **injected)


def load_preset(name: str) -> StochasticModel:
    return model_from_file(preset_file(name))
