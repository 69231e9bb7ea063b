from __future__ import annotations

import logging
import os
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Iterable, Sequence

import colorlog
from rich.console import Console
from rich.table import Table

from . import APP_ROOT

_CONSOLE = Console()
LOG_DIR = APP_ROOT / "logs" / "cli"
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def console() -> Console:
    return _CONSOLE


def ensure_dir(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def configure_logging(name: str) -> None:
    LOG_DIR.mkdir(parents=True, exist_ok=True)
    level = os.getenv("WECS_LOG_LEVEL", "INFO").upper()

    file_handler = RotatingFileHandler(LOG_DIR / f"{name}.log", maxBytes=1_000_000, backupCount=3, encoding="utf-8")
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    stream_handler = colorlog.StreamHandler()
    stream_handler.setFormatter(colorlog.ColoredFormatter("%(log_color)s" + LOG_FORMAT))
    stream_handler.setLevel(logging.WARNING)

    logging.basicConfig(level=getattr(logging, level, logging.INFO), handlers=[file_handler, stream_handler], force=True)


def render_table(title: str, columns: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    table = Table(title=title)
    for idx, column in enumerate(columns):
        table.add_column(column, justify="left" if idx == 0 else "right", style="cyan" if idx == 0 else None)
    for row in rows:
        table.add_row(*(str(cell) for cell in row))
    console().print(table)


def print_errors(title: str, errors: Iterable[str]) -> None:
    render_table(title, ["#", "error"], ((idx, message) for idx, message in enumerate(errors, start=1)))
