import sys

from msdecomp.cli import main

sys.exit(main())
