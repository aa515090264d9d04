"""Tests for the shintani package."""
