"""CLI module for ergavg."""

from ergavg.cli.commands import app, main

__all__ = ["app", "main"]
