from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled sweep core is optional: the package falls back to the pure
# Python engine in torifan._sweep_pure when the extension is unavailable.
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "torifan._sweepcore",
                ["src/torifan/_sweepcore.pyx"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    extensions = []

setup(ext_modules=extensions)
