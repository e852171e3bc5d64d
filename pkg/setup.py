from setuptools import setup
from setuptools.extension import Extension

import numpy
from Cython.Build import cythonize

extensions = [
    Extension(
        "topogate._kernels_cy",
        ["src/topogate/_kernels_cy.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    ),
]

setup(ext_modules=cythonize(extensions, language_level="3"))
