#!/usr/bin/env python3
"""
Shintani - Field File Loader

Reads a field description (TOML): the multiplication table on the reference
basis, the positivity certificate, Cassou-Nogues residue maps and the cone
decomposition. Every section is validated on load; syntax errors carry the
line and column, schema errors the path of the offending key.
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from termcolor import cprint

from shintani.config import Config
from shintani.errors import InputFileError
from shintani.field.characters import HeckeCharacter, enumerate_characters
from shintani.field.cones import (
    ConeContext,
    Decomposition,
    IdealLattice,
    parallelotope_points,
    rational_decomposition,
    validate_decomposition,
)
from shintani.field.model import CNResidueMap, FieldData, validate_cn_map
from shintani.utils import resolve_path

RationalText = Union[int, str]


def _parse_rational(value: RationalText) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise InputFileError(f"not a rational number: {value!r}") from e


# =============================================================================
# FILE SCHEMA
# =============================================================================

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class CertificateSpec(_Strict):
    """theta is a root of polynomial (lowest degree first); basis[i] = v_i in powers of theta."""

    polynomial: list[RationalText]
    basis: list[list[RationalText]]


class FieldSpec(_Strict):
    name: str
    labels: Optional[list[str]] = None
    discriminant: Optional[int] = None
    place_order: Optional[list[int]] = None
    table: Optional[list[list[list[RationalText]]]] = None
    one: Optional[list[RationalText]] = None
    certificate: CertificateSpec

    @field_validator("place_order")
    @classmethod
    def places_are_permutation(cls, v: Optional[list[int]]) -> Optional[list[int]]:
        if v is not None and sorted(v) != list(range(len(v))):
            raise ValueError(f"place_order {v} is not a permutation of 0..{len(v) - 1}")
        return v


class CNSpec(_Strict):
    name: str
    modulus: int = Field(gt=1)
    images: list[int]


class ConeSpec(_Strict):
    label: str = "V"
    generators: list[list[RationalText]]


class IdealSpec(_Strict):
    label: str
    basis: list[list[RationalText]]


class DecompositionSpec(_Strict):
    units: list[list[RationalText]] = []
    cones: list[ConeSpec]
    ring: Optional[list[list[RationalText]]] = None
    ideals: list[IdealSpec] = []


class FieldFile(_Strict):
    field: FieldSpec
    cn: list[CNSpec] = []
    decomposition: Optional[DecompositionSpec] = None


# =============================================================================
# LOADED BUNDLE
# =============================================================================

@dataclass(frozen=True, eq=False)
class FieldBundle:
    """A validated field with its residue maps and decomposition."""

    field: FieldData
    decomposition: Decomposition
    cn_maps: dict[str, CNResidueMap]
    source: Optional[Path] = None

    def cn(self, name: Optional[str] = None) -> CNResidueMap:
        """The named CN map (the only one when name is None)."""
        if name is None:
            if len(self.cn_maps) != 1:
                raise InputFileError(f"choose one of the CN maps {sorted(self.cn_maps)}")
            return next(iter(self.cn_maps.values()))
        try:
            return self.cn_maps[name]
        except KeyError:
            raise InputFileError(f"no CN map named {name!r}; have {sorted(self.cn_maps)}") from None

    def unit_images(self, cn: CNResidueMap) -> tuple[int, ...]:
        return tuple(cn.apply(u) for u in self.decomposition.units)

    def characters(self, cn: CNResidueMap) -> list[HeckeCharacter]:
        return enumerate_characters(cn, self.unit_images(cn))

    def character(self, cn: CNResidueMap, index: int) -> HeckeCharacter:
        chars = self.characters(cn)
        if not 0 <= index < len(chars):
            raise InputFileError(f"character index {index} out of range 0..{len(chars) - 1}")
        return chars[index]


def _matrix(rows) -> list[list[Fraction]]:
    return [[_parse_rational(c) for c in row] for row in rows]


def _build_field(spec: FieldSpec) -> FieldData:
    cert = spec.certificate
    if spec.table is None:
        return FieldData.from_polynomial(
            spec.name,
            [_parse_rational(c) for c in cert.polynomial],
            _matrix(cert.basis),
            labels=spec.labels,
            place_order=spec.place_order,
            discriminant=spec.discriminant,
        )
    k = len(spec.table)
    one = spec.one if spec.one is not None else [1] + [0] * (k - 1)
    return FieldData(
        name=spec.name,
        degree=k,
        labels=tuple(spec.labels) if spec.labels else tuple(f"v{i + 1}" for i in range(k)),
        table=tuple(tuple(tuple(_parse_rational(c) for c in entry) for entry in row) for row in spec.table),
        one=tuple(_parse_rational(c) for c in one),
        polynomial=tuple(_parse_rational(c) for c in cert.polynomial),
        theta_basis=tuple(tuple(row) for row in _matrix(cert.basis)),
        place_order=tuple(spec.place_order) if spec.place_order is not None else tuple(range(k - 1, -1, -1)),
        discriminant=spec.discriminant,
    )


def _build_decomposition(field: FieldData, spec: Optional[DecompositionSpec]) -> Decomposition:
    if spec is None:
        if field.degree != 1:
            raise InputFileError("a [decomposition] table is required for degree > 1")
        return rational_decomposition(field)
    cones = tuple(
        ConeContext.build(field, [field.element(g) for g in _matrix(c.generators)], c.label)
        for c in spec.cones
    )
    units = tuple(field.element(u) for u in _matrix(spec.units))
    ring_rows = _matrix(spec.ring) if spec.ring else [list(field.basis_element(i).coords) for i in range(field.degree)]
    ring = IdealLattice("O", tuple(field.element(r) for r in ring_rows))
    ideals = tuple(
        IdealLattice(i.label, tuple(field.element(r) for r in _matrix(i.basis))) for i in spec.ideals
    ) or (ring,)
    dec = Decomposition(field, cones, units, ring, ideals)
    validate_decomposition(dec)
    return dec


def parse_field(text: str, source: Optional[Path] = None) -> FieldBundle:
    """Parse and validate a field description.

    Raises:
        InputFileError: TOML syntax or schema violation
        FieldDataInvalid: inconsistent multiplication table or certificate
        CNMapInvalid: a residue map is not a ring homomorphism
    """
    where = f"{source}: " if source else ""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise InputFileError(f"{where}{e}") from e
    try:
        spec = FieldFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        path = ".".join(str(part) for part in first["loc"])
        raise InputFileError(f"{where}{path}: {first['msg']}") from e

    field = _build_field(spec.field)
    cn_maps: dict[str, CNResidueMap] = {}
    for c in spec.cn:
        cn = CNResidueMap(c.modulus, tuple(r % c.modulus for r in c.images), c.name)
        validate_cn_map(field, cn)
        cn_maps[c.name] = cn
    decomposition = _build_decomposition(field, spec.decomposition)
    return FieldBundle(field, decomposition, cn_maps, source)


def load_field(path: Union[str, Path]) -> FieldBundle:
    """Load a field file; relative names are looked up under data/fields."""
    candidate = Path(path)
    if not candidate.suffix:
        candidate = Path(Config.FIELDS_DIR) / f"{path}.toml"
    resolved = resolve_path(candidate)
    if not resolved.exists():
        raise InputFileError(f"field file not found: {resolved}")
    return parse_field(resolved.read_text(), resolved)


def describe(bundle: FieldBundle) -> dict:
    """JSON-ready summary used by the field subcommand."""
    field = bundle.field
    dec = bundle.decomposition
    return {
        "name": field.name,
        "degree": field.degree,
        "labels": list(field.labels),
        "place_order": list(field.place_order),
        "cn_maps": {
            name: {"modulus": cn.modulus, "images": list(cn.images), "unit_images": list(bundle.unit_images(cn))}
            for name, cn in sorted(bundle.cn_maps.items())
        },
        "units": [u.to_json() for u in dec.units],
        "cones": [
            {
                "label": cone.label,
                "generators": [g.to_json() for g in cone.generators],
                "included_faces": list(cone.included),
                "points": {
                    lat.label: [x.to_json() for x in parallelotope_points(cone, lat)] for lat in dec.ideals
                },
            }
            for cone in dec.cones
        ],
    }


if __name__ == "__main__":
    bundle = load_field("qsqrt5")
    cprint("=" * 60, "cyan")
    cprint(f"FIELD {bundle.field.name}", "cyan", attrs=["bold"])
    cprint("=" * 60, "cyan")
    for key, value in describe(bundle).items():
        cprint(f"  {key}: {value}", "green")
    cprint("\n✅ Field loaded!", "green", attrs=["bold"])
