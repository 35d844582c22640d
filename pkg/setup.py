"""Build script for the optional compiled kernel extension.

The package is pure Python except for ``rootlink._kernels``, a Cython
translation of ``rootlink._kernels_py``.  When Cython (or a C compiler) is
unavailable the extension is simply skipped and the package falls back to the
pure implementation at import time.  Set ROOTLINK_NO_EXT=1 to skip the build
explicitly.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ROOTLINK_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        extensions = [
            Extension(
                "rootlink._kernels",
                ["src/rootlink/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ]
        ext_modules = cythonize(
            extensions, compiler_directives={"language_level": "3"}
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
