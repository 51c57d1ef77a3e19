import sys

from brackets.main import main

sys.exit(main())
