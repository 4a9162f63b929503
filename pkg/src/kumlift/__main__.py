import sys

from kumlift.cli import main

sys.exit(main())
