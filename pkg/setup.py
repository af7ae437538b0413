"""Build script.  The compiled kernel extension is optional: when Cython or a
C compiler is unavailable (or CLIFFOLD_NO_EXT=1 is set) the package installs
with the pure-numpy kernel backend only.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("CLIFFOLD_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/cliffold/_kernels/_cy.pyx"],
            language_level=3,
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
