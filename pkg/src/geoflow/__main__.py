import sys

from geoflow.cli import main

sys.exit(main())
