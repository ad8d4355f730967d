import sys

from fmtkit.cli import main

sys.exit(main())
