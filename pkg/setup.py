from setuptools import Extension, setup

# The compiled sort kernel is optional: when Cython (or a C compiler) is
# unavailable the package installs anyway and falls back to the pure-Python
# kernel at import time.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "ohhcsim._sortcore",
                sources=["src/ohhcsim/_sortcore.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
