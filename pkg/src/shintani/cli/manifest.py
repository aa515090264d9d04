#!/usr/bin/env python3
"""
Shintani - Run Manifest

A verification run described in TOML: the instances (field file, CN map,
prime, characters, truncation levels), the suites to run, the output paths
and the seed for randomized property checks.
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from shintani.config import Config
from shintani.errors import InputFileError
from shintani.utils import resolve_path

SUITES = ("derivative", "fg", "gamma", "identities", "lemma33", "lvalues", "omega", "oracles", "periods")


def _check_suites(suites: list[str]) -> list[str]:
    unknown = sorted(set(suites) - set(SUITES))
    if unknown:
        raise ValueError(f"unknown suites {unknown}; choose from {list(SUITES)}")
    return sorted(set(suites))


class InstanceSpec(BaseModel):
    """One (field, N, p) setting."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    field: str
    cn: str
    p: int = Field(gt=2)
    characters: list[int] = []
    levels: int = Field(default=1, ge=1)
    precision: int = Field(default=Config.DEFAULT_PRECISION, ge=1)
    derivative_precision: int = Field(default=3, ge=1)
    derivative: bool = False


class RunManifest(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    seed: int = 0
    suites: list[str] = list(SUITES)
    output: Optional[str] = None
    csv: Optional[str] = None
    instances: list[InstanceSpec] = []
    oracle_samples: int = Field(default=40, ge=0)
    gamma_samples: int = Field(default=10, ge=0)
    gamma_precision: int = Field(default=Config.GAMMA_PRECISION, ge=1)
    fg_max_q: int = Field(default=256, ge=2)
    curious_max_n: int = Field(default=300, ge=2)
    lemma33_max_k: int = Field(default=3, ge=1)

    @field_validator("suites")
    @classmethod
    def known_suites(cls, v: list[str]) -> list[str]:
        return _check_suites(v)

    def select(self, suites: Optional[list[str]] = None, fg_max_q: Optional[int] = None) -> "RunManifest":
        """A copy restricted to suites, with an optional FG bound override."""
        update: dict = {}
        if suites:
            update["suites"] = _check_suites(suites)
        if fg_max_q is not None:
            update["fg_max_q"] = fg_max_q
        return self.model_copy(update=update)


def parse_manifest(text: str, source: Optional[Path] = None) -> RunManifest:
    """Parse a manifest.

    Raises:
        InputFileError: TOML syntax (with line and column) or schema violation
    """
    where = f"{source}: " if source else ""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise InputFileError(f"{where}{e}") from e
    try:
        return RunManifest.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        path = ".".join(str(part) for part in first["loc"])
        raise InputFileError(f"{where}{path}: {first['msg']}") from e


def load_manifest(path: Union[str, Path]) -> RunManifest:
    """Load a manifest; bare names are looked up under data/manifests."""
    candidate = Path(path)
    if not candidate.suffix:
        candidate = Path(Config.MANIFESTS_DIR) / f"{path}.toml"
    resolved = resolve_path(candidate)
    if not resolved.exists():
        raise InputFileError(f"manifest not found: {resolved}")
    return parse_manifest(resolved.read_text(), resolved)
