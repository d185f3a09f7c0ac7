"""
kirchwell: a finite-difference workbench for the indefinite Kirchhoff
equation with a steep potential well.
"""

#: Package version, also written into every artifact sidecar.
__version__ = '0.1.0'
