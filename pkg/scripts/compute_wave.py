#!/usr/bin/env python3
"""Compute the travelling wave for a cubic potential and print diagnostics.

Usage: python3 scripts/compute_wave.py [--a 0.25] [--out DIR]
"""

import sys

from frontlab.cli import main

if __name__ == "__main__":
    sys.exit(main(["wave", "--check-identity", "0.2,0.3,0.45", *sys.argv[1:]]))
