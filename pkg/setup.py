import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("TERNCOH_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("ternary_cohomology.exactmath._kernels",
                       ["src/ternary_cohomology/exactmath/_kernels.pyx"],
                       extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
