"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure numpy
backend is selected at import time), so any build failure here is
downgraded to a warning rather than aborting the install.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "quadlab.kernels._native",
                ["src/quadlab/kernels/_native.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    warnings.warn(f"quadlab: native kernels not built ({exc}); using pure backend")

setup(ext_modules=ext_modules)
