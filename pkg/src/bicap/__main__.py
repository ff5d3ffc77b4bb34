"""``python -m bicap``."""

import sys

from bicap.cli import main

sys.exit(main())
