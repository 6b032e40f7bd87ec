"""Build the optional compiled kernels; the package falls back to pure Python without them."""
from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:  # no Cython/numpy at build time: pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "subsearch._core",
                ["src/subsearch/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
