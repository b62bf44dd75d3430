"""Build script for the compiled decoding/analysis kernels.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compile only costs speed.  Set the environment
variable PROTORELAY_REQUIRE_EXT=1 to turn a build failure into an error.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that degrades to a warning unless the extension is required."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            self._handle(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._handle(exc)

    def _handle(self, exc):
        if os.environ.get("PROTORELAY_REQUIRE_EXT"):
            raise
        sys.stderr.write(
            f"warning: building the compiled kernels failed ({exc}); "
            "falling back to the pure NumPy implementation\n"
        )


def extensions():
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "protorelay.kernels._core",
        ["src/protorelay/kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
