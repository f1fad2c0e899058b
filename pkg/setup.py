"""Build the optional Cython kernels.

The package works without them; ``mdiffnet.kernels`` falls back to numpy
when the compiled module is missing.
"""
import os

import numpy
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MDIFFNET_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "mdiffnet._kernels",
                    ["src/mdiffnet/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level="3",
            annotate=False,
        )

setup(ext_modules=ext_modules)
