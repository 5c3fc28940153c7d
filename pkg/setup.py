"""Builds the optional Cython decode kernel.

The package works without it: sdof_lab._backend falls back to a pure-numpy
implementation when the extension is missing.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy

    ext_modules = cythonize(
        [
            Extension(
                "sdof_lab._kernels",
                ["src/sdof_lab/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
