import sys

from centerseg.cli import main

sys.exit(main())
