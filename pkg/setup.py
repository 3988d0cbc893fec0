import os

from setuptools import Extension, setup

# The combination kernel compiles with Cython when available; the package
# falls back to the pure-Python kernel at import time if the extension is
# missing, so a failed build is not fatal.
ext_modules = []
if os.environ.get("ERMCDA_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "ermcda._kernels._combine_cy",
                    ["src/ermcda/_kernels/_combine_cy.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
