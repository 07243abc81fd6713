"""Build script for the optional compiled flow kernel.

The package works without the extension (a numpy fallback is selected at
import time), so the build is marked optional and failures only warn.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "fumble.kernels._hs_cy",
                sources=["src/fumble/kernels/_hs_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
