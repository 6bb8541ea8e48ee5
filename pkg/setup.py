"""Build script: compiles the optional speed kernels.

The package works without the extension (pure-Python fallbacks are
selected at import time), so any build failure here downgrades to a
plain install instead of aborting.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    import numpy

    ext_modules = cythonize(
        ["src/railtalk/kernels/_speed.pyx"],
        language_level=3,
    )
    include_dirs = [numpy.get_include()]
except Exception:  # no Cython / no compiler: install pure-Python only
    ext_modules = []
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
