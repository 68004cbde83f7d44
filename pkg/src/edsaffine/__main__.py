import sys

from edsaffine.cli import main

sys.exit(main())
