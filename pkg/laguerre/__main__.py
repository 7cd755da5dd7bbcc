import sys

from laguerre.main import main

sys.exit(main())
