import sys

from pagani.main import main

sys.exit(main())
