#!/usr/bin/env python3
"""Run the full claim-verification suite and write JSON reports.

Usage: python3 scripts/run_verify_suite.py [--experiments a,b] [--claims x,y]
       [--workers N] [--out DIR]

The full default suite takes roughly ten minutes single-threaded; pass
--experiments wave_oracle,energy_identities for a quick smoke.
"""

import sys

from frontlab.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify", *sys.argv[1:]]))
