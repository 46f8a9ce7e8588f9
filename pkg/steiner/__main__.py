import sys

from steiner.cli import main

sys.exit(main())
