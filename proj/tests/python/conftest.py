import os
import shutil

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("CSTIRAP_CLI") or shutil.which("cstirap")
    if not path:
        pytest.skip("cstirap executable not found; set CSTIRAP_CLI")
    return path
