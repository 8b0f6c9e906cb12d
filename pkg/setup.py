"""Build script for the optional compiled series kernel.

The extension is marked optional: if no C compiler (or Cython) is available
the install still succeeds and the package falls back to the NumPy engine.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fdu._series_cy",
                ["src/fdu/_series_cy.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
