import os
from dotenv import load_dotenv

load_dotenv()

GAUSSLAB_TOL = float(os.environ.get("GAUSSLAB_TOL", "1e-8"))
GAUSSLAB_TRIALS = int(os.environ.get("GAUSSLAB_TRIALS", "10000"))
GAUSSLAB_SEED = int(os.environ.get("GAUSSLAB_SEED", "0"))
GAUSSLAB_LOG_LEVEL = os.environ.get("GAUSSLAB_LOG_LEVEL", "WARNING").upper()
GAUSSLAB_FORMAT = os.environ.get("GAUSSLAB_FORMAT", "text")
