"""
Shims for differences between the scipy releases we support.
"""
from inspect import signature

from scipy.sparse.linalg import cg


def _cg_tolerance_keyword():
    # scipy 1.12 renamed ``tol`` to ``rtol``; 1.14 dropped ``tol``.
    if 'rtol' in signature(cg).parameters:
        return 'rtol'
    return 'tol'


def _cg(A, b, rtol, maxiter, M=None, x0=None):
    """Call scipy's conjugate gradient with a relative tolerance whatever the
    installed keyword is.

    :returns: tuple(numpy.ndarray, int) as scipy returns it.
    """
    kwargs = {_cg_tolerance_keyword(): rtol, 'maxiter': maxiter, 'M': M}
    if x0 is not None:
        kwargs['x0'] = x0
    return cg(A, b, atol=0.0, **kwargs)
