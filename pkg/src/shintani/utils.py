"""Shared utilities for the Shintani package."""

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import TypeVar

from termcolor import cprint

from shintani.config import worker_count

T = TypeVar("T")
R = TypeVar("R")


def get_project_root() -> Path:
    """Get project root directory.

    Order of precedence:
    1. PROJECT_ROOT environment variable
    2. Find pyproject.toml by walking up directory tree
    3. Fall back to the current working directory if it holds a data/ folder
    """
    if env_root := os.environ.get("PROJECT_ROOT"):
        return Path(env_root)

    current = Path(__file__).resolve()
    for parent in current.parents:
        if (parent / "pyproject.toml").exists():
            return parent

    if (Path.cwd() / "data").is_dir():
        return Path.cwd()

    raise RuntimeError("Could not find project root")


def resolve_path(path: str | Path) -> Path:
    """Resolve a relative data path against the project root."""
    candidate = Path(path)
    if candidate.is_absolute() or candidate.exists():
        return candidate
    return get_project_root() / candidate


def parallel_map(func: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map over items, in a process pool when SHINTANI_WORKERS > 1.

    Results keep the input order, so reductions over them are deterministic.
    """
    items = list(items)
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    try:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, items))
    except (OSError, RuntimeError) as e:
        cprint(f"  Warning: process pool unavailable ({e}), running serially", "yellow")
        return [func(item) for item in items]
