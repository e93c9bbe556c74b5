"""Builds the optional compiled Monte Carlo kernel.

If Cython or a C compiler is missing the package still installs and falls
back to the numpy kernel at import time.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernel not built ({exc}); using numpy fallback",
                  file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc})", file=sys.stderr)


def extensions():
    if os.environ.get("LACUNA_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension(
        "lacuna.oracle._mc_core",
        ["src/lacuna/oracle/_mc_core.pyx"],
        # no FMA contraction: counts must match the numpy kernel bit for bit
        extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"}, quiet=True)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
