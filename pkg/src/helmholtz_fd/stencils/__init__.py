# -*- coding: utf-8 -*-
"""Finite difference stencils: reference footprints, order conditions and pollution minimization."""
