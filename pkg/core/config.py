"""Strict configuration models with unit-suffixed keys and aggregated errors."""
from __future__ import annotations

import copy
import logging
import math
import typing
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Set, Tuple, Type

import yaml
from pydantic import BaseModel, ConfigDict, ValidationError

logger = logging.getLogger(__name__)

UNIT_TOKENS = {
    "m", "m2", "s", "s2", "hz", "mps", "kgm2", "kgm3", "nm", "nms", "per", "rad", "deg",
    "ohm", "h", "f", "v", "a", "w", "j",
}


class ConfigError(ValueError):
    """Validation failure carrying every offending ``dotted.path: message``."""

    def __init__(self, errors: Iterable[str]) -> None:
        self.errors: List[str] = list(errors)
        super().__init__("\n".join(self.errors) or "invalid configuration")


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


def load_yaml_text(text: str) -> Dict[str, Any]:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"<document>: not valid YAML/JSON ({exc})"]) from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError([f"<document>: top level must be a mapping, got {type(data).__name__}"])
    return data


def load_yaml_file(path: Path | str) -> Dict[str, Any]:
    cfg_path = Path(path)
    with cfg_path.open("r", encoding="utf-8") as handle:
        return load_yaml_text(handle.read())


def unit_base(name: str) -> str:
    """Strip the trailing unit tokens of a key: ``kf_nms_per_rad`` -> ``kf``."""
    tokens = name.split("_")
    while len(tokens) > 1 and tokens[-1] in UNIT_TOKENS:
        tokens.pop()
    return "_".join(tokens)


def _model_types(annotation: Any) -> List[Type[BaseModel]]:
    if isinstance(annotation, type) and issubclass(annotation, BaseModel):
        return [annotation]
    found: List[Type[BaseModel]] = []
    for arg in typing.get_args(annotation):
        found.extend(_model_types(arg))
    return found


def _join(prefix: str, key: Any) -> str:
    if isinstance(key, int):
        return f"{prefix}[{key}]"
    return f"{prefix}.{key}" if prefix else str(key)


def suffix_mismatches(tree: Any, model: Type[BaseModel], prefix: str = "") -> List[Tuple[str, str, List[str]]]:
    """Return (bad key path, expected path, expected names) for keys with a wrong unit suffix."""
    if not isinstance(tree, Mapping):
        return []
    found: List[Tuple[str, str, List[str]]] = []
    fields = model.model_fields
    for key, value in tree.items():
        path = _join(prefix, key)
        if key in fields:
            for sub in _model_types(fields[key].annotation):
                if isinstance(value, Mapping):
                    found.extend(suffix_mismatches(value, sub, path))
                elif isinstance(value, list):
                    for idx, item in enumerate(value):
                        found.extend(suffix_mismatches(item, sub, _join(path, idx)))
            continue
        key_text = str(key)
        candidates = [
            name
            for name in fields
            if unit_base(name) != name
            and (key_text == unit_base(name) or key_text.startswith(unit_base(name) + "_"))
        ]
        if candidates:
            found.append((path, _join(prefix, candidates[0]), candidates))
    return found


def _loc_to_path(prefix: str, loc: Iterable[Any]) -> str:
    path = prefix
    for part in loc:
        path = _join(path, part)
    return path or "<document>"


def _clean_message(message: str) -> str:
    for marker in ("Value error, ", "Assertion failed, "):
        if message.startswith(marker):
            return message[len(marker):]
    return message


def validate_tree(
    model: Type[BaseModel],
    tree: Mapping[str, Any],
    prefix: str = "",
) -> Tuple[Optional[BaseModel], List[str]]:
    """Validate ``tree`` against ``model`` and collect every error."""
    errors: List[str] = []
    skip: Set[str] = set()
    for bad, expected, names in suffix_mismatches(tree, model, prefix):
        listed = " or ".join(f"'{name}'" for name in names)
        errors.append(f"{bad}: unit suffix mismatch, expected {listed}")
        skip.update({bad, expected})
    try:
        instance = model.model_validate(copy.deepcopy(dict(tree)))
    except ValidationError as exc:
        for item in exc.errors():
            path = _loc_to_path(prefix, item.get("loc", ()))
            if item.get("type") in {"missing", "extra_forbidden"} and path in skip:
                continue
            errors.append(f"{path}: {_clean_message(item.get('msg', 'invalid value'))}")
        return None, errors
    if errors:
        return None, errors
    return instance, errors


def pick_angle(rad: Optional[float], deg: Optional[float], default: float = 0.0) -> float:
    """Resolve an angle given either in radians or in degrees."""
    if rad is not None:
        return float(rad)
    if deg is not None:
        return math.radians(float(deg))
    return default


__all__ = [
    "ConfigError",
    "StrictModel",
    "load_yaml_text",
    "load_yaml_file",
    "unit_base",
    "suffix_mismatches",
    "validate_tree",
    "pick_angle",
]
