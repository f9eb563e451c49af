import sys

from online_unit_clustering.cli import main

sys.exit(main())
