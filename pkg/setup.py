# Builds the optional C accelerator. Pure-Python fallback is used when the
# extension cannot be compiled, so failures here are non-fatal by design.
#
# Rebuild in place during development with:
#   python setup.py build_ext --inplace
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SCENEVOICE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "scenevoice._kernels._core",
                    ["src/scenevoice/_kernels/_core.pyx"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
