"""Build the optional Cython evaluation kernel.

The package works without the extension (a pure-Python fallback is selected
at import time); building it just makes the lasso-evaluation hot loop much
faster.  `HYPERSAT_NO_EXT=1 pip install ...` skips the extension entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HYPERSAT_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/hypersat/_ltlkernel.pyx"],
            language_level=3,
        )
    except Exception as exc:  # pragma: no cover - build-env dependent
        print(f"warning: Cython kernel not built ({exc}); using pure-Python fallback")

setup(ext_modules=ext_modules)
