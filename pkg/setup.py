"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure numpy backend is selected
at import time), so a failed compile only costs speed.  Set FQSL_SKIP_EXT=1
to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("FQSL_SKIP_EXT") and os.path.exists("src/fqsl/_kernels/_core.pyx"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "fqsl._kernels._core",
                    ["src/fqsl/_kernels/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
