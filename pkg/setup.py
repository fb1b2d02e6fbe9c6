from setuptools import Extension, setup

# The compiled kernel is optional: bblab falls back to the pure-Python
# implementation in bblab._kernel_py when the extension is absent.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "bblab._speedups",
                ["src/bblab/_speedups.pyx"],
                extra_compile_args=["-O2"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
