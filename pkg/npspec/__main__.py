import sys

from npspec.cli import main

sys.exit(main())
