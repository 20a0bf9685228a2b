"""Optional compiled-kernel build.

The package is pure Python with a Cython extension for the supersingularity
kernels; if Cython or a C compiler is unavailable the build degrades to the
pure fallback selected at import time in heegner.kernels.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/heegner/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
