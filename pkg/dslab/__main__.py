# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import sys

from .bench.cli import main

sys.exit(main())
