"""Sphinx configuration for the masslump-py API reference."""

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

project = 'masslump-py'
author = 'masslump-py developers'
release = '0.1.0'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinx_autodoc_typehints',
]
exclude_patterns = ['_build']

html_theme = 'sphinx_rtd_theme'

autodoc_default_options = {
    'members': True,
    'member-order': 'bysource',
}

napoleon_google_docstring = True
napoleon_numpy_docstring = False

typehints_defaults = 'comma'
