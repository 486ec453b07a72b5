import importlib
import os
import sys

import pytest


@pytest.fixture(scope="session")
def core():
    """The compiled extension module, whether installed or in a build tree."""
    try:
        import uavsim

        return uavsim
    except ImportError:
        pass
    module_dir = os.environ.get("UAVSIM_PYMODULE_DIR")
    if not module_dir:
        pytest.skip("uavsim is not installed and UAVSIM_PYMODULE_DIR is unset")
    sys.path.insert(0, module_dir)
    try:
        return importlib.import_module("_core")
    finally:
        sys.path.remove(module_dir)
