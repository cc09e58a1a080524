import sys

from rlsupply.cli import main

sys.exit(main())
