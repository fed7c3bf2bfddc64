"""Build script: compiles the optional term-arithmetic extension.

The package is fully functional without the extension (a pure-Python twin is
selected at import time), so any build failure here downgrades to a warning.
"""

import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("TRIWEB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/triweb/_termops_c.pyx"],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except Exception as exc:  # noqa: BLE001 - degrade to pure python
        print(f"warning: skipping compiled kernel ({exc})", file=sys.stderr)
        ext_modules = []

setup(ext_modules=ext_modules)
