# -*- coding: utf-8 -*-
#
# pyenergy documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

import pyenergy  # noqa: E402


# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.mathjax', 'numpydoc']

# numpydoc generates a table of class members for each class otherwise
numpydoc_show_class_members = False

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'pyenergy'
copyright = u'2026, pyenergy developers'
author = u'pyenergy developers'

version = pyenergy.__version__
release = pyenergy.__version__

language = None
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = []
htmlhelp_basename = 'pyenergydoc'


# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}
latex_documents = [
    (master_doc, 'pyenergy.tex', u'pyenergy Documentation',
     author, 'manual'),
]


# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'pyenergy', u'pyenergy Documentation',
     [author], 1)
]


# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    (master_doc, 'pyenergy', u'pyenergy Documentation',
     author, 'pyenergy', 'Two-sample energy test and competitor tests with a power study harness.',
     'Miscellaneous'),
]
