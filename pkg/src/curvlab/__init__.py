"""curvlab: curvature-symmetry laboratory for 4d Lorentzian metrics.

Symbolic curvature from metric component expressions, Newman-Penrose
scalars and Petrov classification over a null tetrad, 2-spinor algebra
checks, residual-based symmetry tests of the second derivative of the
curvature, and a classifier that sorts metrics into the admissible
branches.  A small built-in corpus of exact metrics exercises all of it
through the ``curvlab`` command-line tool.
"""

__version__ = "0.1.0"
