"""Build script: compiles the refinement-round kernel when Cython and a C++
toolchain are available.  Without them the package installs pure-Python only
and `relwl._kernels` falls back to the interpreted twin at import time.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "relwl._ckern",
                ["src/relwl/_ckern.pyx"],
                language="c++",
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
