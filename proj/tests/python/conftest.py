# Under ctest, import the package built in the CMake tree even when an
# installed copy (editable or not) is also present.
import importlib.util
import os
import sys
from pathlib import Path

_tree = os.environ.get("NLLAB_PYTHON_DIR")
if _tree:
    _pkg = Path(_tree) / "nllab"
    _ext = next(_pkg.glob("_nllab*.so"))
    _ext_spec = importlib.util.spec_from_file_location("nllab._nllab", _ext)
    _ext_module = importlib.util.module_from_spec(_ext_spec)
    _ext_spec.loader.exec_module(_ext_module)
    sys.modules["nllab._nllab"] = _ext_module

    _init = _pkg / "__init__.py"
    _spec = importlib.util.spec_from_file_location(
        "nllab", _init, submodule_search_locations=[str(_init.parent)])
    _module = importlib.util.module_from_spec(_spec)
    sys.modules["nllab"] = _module
    _spec.loader.exec_module(_module)
