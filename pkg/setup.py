#!/usr/bin/env python3
"""setuptools shim; project metadata and entry points live in pyproject.toml."""

from __future__ import annotations

import sys

if __name__ == "__main__":
    if len(sys.argv) == 1:
        print("Nothing to do. Install with 'python -m pip install -e .[dev]' or build with 'python -m build'.")
        raise SystemExit(0)

    from setuptools import setup

    setup()
