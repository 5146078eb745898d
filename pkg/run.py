#!/usr/bin/env python3
"""
engel-check runner.

    python run.py check-all --json
    python run.py theorem2-sym --instance-len 2 --conj-len 1
"""

import sys

from app.main import main

if __name__ == "__main__":
    sys.exit(main())
