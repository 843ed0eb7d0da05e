"""Command line interface."""

from .commands import CommandHandler
from .main import build_parser, main

__all__ = ["CommandHandler", "build_parser", "main"]
