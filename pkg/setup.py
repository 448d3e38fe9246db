import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the accelerator extension if possible; fall back to pure Python."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"skipping compiled kernels ({exc}); pure-Python fallback "
                  f"will be used", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"skipping {ext.name} ({exc}); pure-Python fallback will "
                  f"be used", file=sys.stderr)


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(["src/geodex/_iterkern.pyx"], language_level="3")
except Exception as exc:
    print(f"cython unavailable ({exc}); building pure-Python geodex",
          file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
