"""Build hook for the optional compiled kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time), so any build failure here is
non-fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "parsim.kernels._core",
                ["src/parsim/kernels/_core.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"parsim: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
