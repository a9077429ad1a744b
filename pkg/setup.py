"""Optional compiled kernels.

The package is pure Python; when Cython and a C compiler are available the
hot combinatorial kernels (gcx/_kernels.py) are additionally compiled as
gcx._kernels_c and selected automatically at import (see gcx/kernels.py).
A missing toolchain is not an error.  The extension shares the exact source
of the pure fallback: _kernels.py is copied to _kernels_c.py at build time
so the two backends cannot drift apart.
"""

import shutil
from pathlib import Path

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    here = Path(__file__).parent
    src = here / "src" / "gcx" / "_kernels.py"
    twin = here / "src" / "gcx" / "_kernels_c.py"
    shutil.copyfile(src, twin)
    ext_modules = cythonize(
        [str(twin)],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
