import sys

from cscgates.cli import main

sys.exit(main())
