import sys

from spernerlab.cli import main

sys.exit(main())
