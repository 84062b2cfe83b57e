# The compiled kernels are optional: if Cython or a compiler is missing the
# package still installs and falls back to creature_lab._purepy at import.
import os

from setuptools import setup

ext_modules = []
if os.environ.get("CREATURE_LAB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("creature_lab._speedups", ["src/creature_lab/_speedups.pyx"])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
            quiet=True,
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"creature_lab: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
