"""Builds the optional compiled kernel; the package works without it."""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: pure-Python kernel only
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("nichols_lattice._kernels", ["src/nichols_lattice/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules)
