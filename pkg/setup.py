"""Build hooks for the optional compiled simplex kernel.

The package is pure python plus one Cython extension. If Cython or a C
compiler is unavailable the build degrades to the pure-python kernel;
anash.lp picks whichever is importable at runtime.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, warn and continue if not."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"warning: compiled simplex kernel not built ({exc}); "
            "falling back to the pure-python kernel",
            file=sys.stderr,
        )


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        optional_build_ext._warn(exc)
        return []
    ext = Extension(
        "anash._simplex_core",
        sources=["src/anash/_simplex_core.pyx"],
        include_dirs=[numpy.get_include()],
        # contraction off keeps pivot arithmetic identical to numpy's
        # separate multiply/subtract, so the two kernels stay in lockstep
        extra_compile_args=["-O2", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
