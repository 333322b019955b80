"""Build script for the optional compiled propagation core.

The package works without the extension (a numpy fallback is selected at
import time), so build failures here should not be fatal for pure-Python
installs.  We still let errors propagate under normal pip builds because
the sdist ships the .pyx and a working toolchain is the common case.
"""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "lambdagates._core",
        ["src/lambdagates/_core.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
