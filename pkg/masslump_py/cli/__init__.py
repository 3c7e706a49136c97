"""Command-line interface."""

from . import main
from .main import build_parser

__all__ = ["build_parser", "main"]
