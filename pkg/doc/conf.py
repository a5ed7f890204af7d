"""Sphinx configuration of the biblioscope documentation."""
import os
import sys

# Document the package of this source tree
sys.path.insert(0, os.path.abspath('..'))

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode']

source_suffix = '.rst'
master_doc = 'index'

project = 'biblioscope'
copyright = '2026, biblioscope developers'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

autodoc_member_order = 'bysource'

html_theme = 'alabaster'
htmlhelp_basename = 'biblioscopedoc'

man_pages = [
    ('index', 'biblioscope', 'biblioscope Documentation',
     ['biblioscope developers'], 1)
]
