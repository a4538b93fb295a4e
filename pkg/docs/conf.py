# Sphinx configuration for the npspec documentation.

import os
import re
import sys

on_rtd = os.environ.get('READTHEDOCS') == 'True'
if not on_rtd:
    sys.path.insert(0, os.path.abspath('..'))


def _version():
    with open(os.path.join(os.path.dirname(__file__), '..', 'npspec', '__init__.py')) as f:
        return re.search(r"^__version__ = '([^']+)'", f.read(), re.M).group(1)


project = 'npspec'
copyright = '2026, The npspec Authors'
author = 'The npspec Authors'
master_doc = 'index'
release = _version()
version = '.'.join(release.split('.')[:2])

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
]

autodoc_member_order = 'bysource'
autodoc_default_options = {'undoc-members': False, 'show-inheritance': True}
napoleon_numpy_docstring = True
napoleon_google_docstring = False
intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
}

exclude_patterns = ['_build', 'README.rst']
smartquotes = False
html_theme = 'sphinx_rtd_theme'
