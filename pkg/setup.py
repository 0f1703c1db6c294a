"""Build shim for the optional compiled solver core.

The package works without the extension (a pure-Python twin is selected at
import time); compilation failures therefore downgrade to a warning instead
of failing the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/catsim/treeval/_core.pyx"],
        language_level=3,
    )
    include_dirs = [numpy.get_include()]
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"catsim: skipping compiled core ({exc})", file=sys.stderr)
    include_dirs = []

for ext in ext_modules:
    ext.include_dirs = include_dirs

setup(ext_modules=ext_modules)
