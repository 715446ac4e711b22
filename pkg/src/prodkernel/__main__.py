import sys

from prodkernel.bench.cli import main

sys.exit(main())
