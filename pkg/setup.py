"""Build script; the compiled kernel backend is optional.

Set CELLASSOC_NO_EXTENSION=1 (or build without Cython available) to get a
pure-Python install; the package selects the backend at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CELLASSOC_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "cellassoc._kernels._speedups",
                    ["src/cellassoc/_kernels/_speedups.pyx"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
