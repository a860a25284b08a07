"""Builds the optional compiled cost kernels.

The package works without them (a pure-Python fallback is selected at
import time), but the exact oracles are considerably faster compiled.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "cstlab._kernel_c",
                ["src/cstlab/_kernel_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
