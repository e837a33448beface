# -*- coding: utf-8 -*-
"""High-order compact finite differences for exterior Helmholtz problems with circular PMLs."""
__version__ = '0.1.0'
