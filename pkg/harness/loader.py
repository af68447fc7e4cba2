"""
TOML configuration loading with line- and field-level error reporting
"""
import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from config import ConfigError
from .models import IdentityConfig, SweepConfig

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)

_LINE_PATTERN = re.compile(r"line (\d+)")


def _read_toml(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        with path.open("rb") as handle:
            return tomllib.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as e:
        match = _LINE_PATTERN.search(str(e))
        line = int(match.group(1)) if match else None
        raise ConfigError(f"{path}: {e}", line=line)


def _validate(model: Type[ModelT], data: Dict[str, Any], path: Union[str, Path]) -> ModelT:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"]) or None
        message = error["msg"]
        raise ConfigError(f"{path}: {field or 'config'}: {message}", field=field)


def load_config(path: Union[str, Path]) -> SweepConfig:
    """Parse and validate a sweep configuration; defaults are applied and echoed"""
    cfg = _validate(SweepConfig, _read_toml(path), path)
    logger.info("loaded %s sweep config from %s: %s", cfg.experiment.value, path, cfg.model_dump_json())
    return cfg


def load_identity_config(path: Union[str, Path]) -> IdentityConfig:
    """Identity-suite parameters from a top-level [identities] table (or the whole file)"""
    data = _read_toml(path)
    cfg = _validate(IdentityConfig, data.get("identities", data), path)
    logger.info("loaded identity config from %s: %s", path, cfg.model_dump_json())
    return cfg
