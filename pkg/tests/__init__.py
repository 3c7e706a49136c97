"""Tests for masslump-py library."""
