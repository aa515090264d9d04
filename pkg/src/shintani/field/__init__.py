"""
Totally real fields, Shintani cone decompositions and characters.

Modules:
    model: fields by multiplication table, elements, CN residue maps
    cones: cones, parallelotope points, locate, quadratic decompositions
    characters: residue, Hecke and psi characters
    loader: TOML field files
"""

from .loader import FieldBundle, load_field, parse_field

__all__ = ["FieldBundle", "load_field", "parse_field"]
