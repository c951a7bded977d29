import sys

from reflectal.cli import main

sys.exit(main())
