import sys

from collection_sim.main import main

sys.exit(main())
