import os

from setuptools import setup

ext_modules = []
if os.environ.get("WFLTL_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/wfltl/_satcore.pyx"], language_level=3, annotate=False
        )
    except Exception:
        # No Cython toolchain: install the pure-Python solver only.
        ext_modules = []

setup(ext_modules=ext_modules)
