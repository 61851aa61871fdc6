import sys
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Add the project root directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import json

import numpy as np
import pytest

from gausslab.main import main
from gausslab.services.parser_service import parse_poly


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def poly():
    """Shorthand: poly("z1^2 + z2^2") parses with the real grammar."""
    return parse_poly


# Runs the CLI in-process and returns (exit code, parsed JSON report or raw stdout, stderr)
@pytest.fixture
def run_cli(capsys):
    def _run(*argv, as_json=True):
        args = list(argv) + (["--format", "json"] if as_json else [])
        code = main(args)
        captured = capsys.readouterr()
        out = captured.out.strip()
        if as_json and out:
            return code, json.loads(out), captured.err
        return code, out, captured.err

    return _run
