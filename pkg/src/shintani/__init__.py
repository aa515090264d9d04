"""Shintani - p-adic Hecke L-functions of totally real fields through Shintani cones."""

__version__ = "0.1.0"
