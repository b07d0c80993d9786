#! /usr/bin/env python
"""morl.__main__: executed when morl directory is called as script."""

from .morl import main
main()
