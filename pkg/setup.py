"""Build script for the optional compiled calendar-scan kernel.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile only costs speed, not functionality.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/dagsched/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - depends on build machine
    import warnings

    warnings.warn(f"building without compiled kernels: {exc}")
    ext_modules = []

setup(ext_modules=ext_modules)
