"""Run the command line with ``python -m fastsize``."""

import sys

from .cli import main

sys.exit(main())
