import sys

from igtopo.cli import main

sys.exit(main())
