"""Allow ``python -m odhall``."""

import sys

from odhall.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
