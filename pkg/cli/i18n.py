from __future__ import annotations

import json
import os
from typing import Dict, Optional

from . import LOCALES_DIR, RC_FILE

SUPPORTED = ("en", "ro")

_CACHE: Dict[str, Dict[str, str]] = {}
_LANG: Optional[str] = None


def _load_language(lang: str) -> Dict[str, str]:
    if lang in _CACHE:
        return _CACHE[lang]
    path = LOCALES_DIR / f"{lang}.json"
    if not path.exists():
        if lang != "en":
            return _load_language("en")
        return {}
    with path.open("r", encoding="utf-8-sig") as handle:
        data = json.load(handle)
    _CACHE[lang] = data
    return data


def _rc_lang() -> Optional[str]:
    if not RC_FILE.exists():
        return None
    try:
        with RC_FILE.open("r", encoding="utf-8") as handle:
            lang = json.load(handle).get("lang")
    except (json.JSONDecodeError, AttributeError):
        return None
    return lang if lang in SUPPORTED else None


def get_lang(default: str = "en") -> str:
    """WECS_LANG wins over the rc file, which wins over ``default``."""
    global _LANG  # noqa: PLW0603
    env_lang = os.getenv("WECS_LANG")
    if env_lang in SUPPORTED:
        return env_lang
    if _LANG:
        return _LANG
    _LANG = _rc_lang() or default
    return _LANG


def set_lang(lang: str) -> None:
    global _LANG  # noqa: PLW0603
    if lang not in SUPPORTED:
        raise ValueError(f"Unsupported language '{lang}', choose one of {', '.join(SUPPORTED)}")
    _LANG = lang
    RC_FILE.write_text(json.dumps({"lang": lang}, indent=2), encoding="utf-8")


def reset_lang() -> None:
    global _LANG  # noqa: PLW0603
    _LANG = None


def t(key: str, **fmt) -> str:
    lang = get_lang()
    catalog = _load_language(lang)
    if key not in catalog and lang != "en":
        catalog = _load_language("en")
    value = catalog.get(key, key)
    if fmt:
        try:
            value = value.format(**fmt)
        except (KeyError, IndexError, ValueError):
            pass
    return value
