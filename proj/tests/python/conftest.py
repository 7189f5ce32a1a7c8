"""Assembles the talkmix package from the source tree plus the built
extension module, so the smoke tests run against the CMake build without an
installed wheel. TALKMIX_PKG_DIR points at python/, TALKMIX_EXT_DIR at the
directory containing the compiled _core module."""

import importlib.util
import os
import sys


def _load_talkmix():
    if "talkmix" in sys.modules:
        return
    pkg_dir = os.environ.get("TALKMIX_PKG_DIR")
    ext_dir = os.environ.get("TALKMIX_EXT_DIR")
    if not pkg_dir or not ext_dir:
        return  # fall back to an installed talkmix, if any
    init = os.path.join(pkg_dir, "talkmix", "__init__.py")
    spec = importlib.util.spec_from_file_location(
        "talkmix",
        init,
        submodule_search_locations=[os.path.join(pkg_dir, "talkmix"), ext_dir],
    )
    module = importlib.util.module_from_spec(spec)
    sys.modules["talkmix"] = module
    spec.loader.exec_module(module)


_load_talkmix()
