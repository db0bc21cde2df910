import sys

from photonlab.cli.main import main

sys.exit(main())
