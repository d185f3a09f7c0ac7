# -*- coding: utf-8 -*-
#
# kirchwell documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys

import mock

# Add the parent folder to the Python path so Sphinx can import kirchwell
# modules.
sys.path.insert(0, os.path.abspath('..'))

# matplotlib is optional; keep the docs build free of it.
sys.modules['matplotlib'] = mock.Mock()


# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'kirchwell'
copyright = u'2026, the kirchwell developers'
author = u'the kirchwell developers'
version = u'0.1.0'
release = u'0.1.0'

language = 'en'
exclude_patterns = ['_build']
pygments_style = 'sphinx'
todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

html_static_path = ['_static']
htmlhelp_basename = 'kirchwelldoc'


# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
}

latex_documents = [
  (master_doc, 'kirchwell.tex', u'kirchwell Documentation',
   author, 'manual'),
]


# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'kirchwell', u'kirchwell Documentation',
     [author], 1)
]
