"""Build hook for the optional compiled edit-distance kernel.

Project metadata lives in pyproject.toml.  If Cython or a C compiler is
missing, the package installs without the extension and falls back to the
pure-Python kernel at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [Extension("itnkit._editdist", ["src/itnkit/_editdist.pyx"], optional=True)],
        language_level=3,
    )

setup(ext_modules=ext_modules)
