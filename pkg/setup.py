# Build the optional Cython kernels; the package falls back to numpy when they are absent.
import os

from setuptools import setup

ext_modules = []
if os.environ.get("ZIGZAG_POWER_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "zigzag_power.kernels._ckernels",
                    ["src/zigzag_power/kernels/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
