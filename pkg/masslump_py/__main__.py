"""Allow ``python -m masslump_py``."""

import sys

from .cli.main import main

sys.exit(main())
