import sys

from hgpopt.cli import main

sys.exit(main())
