"""Build script: compiles the optional double-double sieve kernel.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile only costs speed.  Set MERTENSAP_NO_EXT=1
to skip the build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("MERTENSAP_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "mertensap.kernels._core",
                    ["src/mertensap/kernels/_core.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
