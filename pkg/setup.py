"""Build glue for the optional compiled Monte-Carlo kernel.

The package is pure Python with a numpy fallback; when Cython and a C
compiler are available the hot indicator-sum loop is compiled.  Any build
failure falls back to the pure installation.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/weylcones/_mckernel.pyx"],
        compiler_directives={"language_level": "3"},
    )
    include_dirs = [numpy.get_include()]
except Exception:
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
