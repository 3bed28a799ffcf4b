"""
Command-line tools of the toolkit (click group `wfse`).
"""

from src.cli.main import cli, main

__all__ = ['cli', 'main']
