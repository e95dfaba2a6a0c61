"""Build script: compiles the optional series-arithmetic extension.

The package works without the extension (a pure-Python fallback with the
same interface is selected at import time), so the extension is marked
optional and a failed compile does not fail the install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pdisk._kernels",
                ["src/pdisk/_kernels.pyx"],
                extra_compile_args=["-O2"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
