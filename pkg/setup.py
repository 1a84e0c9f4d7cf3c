import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("hyperhurwitz._kernels", ["src/hyperhurwitz/_kernels.pyx"],
                   include_dirs=[numpy.get_include()])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
