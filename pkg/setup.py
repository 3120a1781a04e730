"""Build hook for the optional compiled kernel extension.

The package is pure Python by default.  If Cython is available (and
QX_NO_EXT is not set) we additionally compile qx._kernels._fast, which
the kernel loader prefers at import time.  Everything works without it.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("QX_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/qx/_kernels/_fast.pyx"],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
