#!/usr/bin/env python3
"""Convenience wrapper around the benchmark CLI (same as `mvdtw-bench` or
`python -m mvdtw`).

Example:
    python scripts/make_synthetic.py --out-dir data
    python scripts/run_benchmark.py --data data/*.mts \
        --method none lb_mv lb_ti lb_pc tc_dtw --window 10 20 \
        --reps 3 --emit table
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from mvdtw.cli import main

if __name__ == "__main__":
    sys.exit(main())
