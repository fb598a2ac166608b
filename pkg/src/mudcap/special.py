"""Special functions behind the capacity bounds and the antenna pattern.

All functions are pure and stateless, so they can be called concurrently
from any number of threads.
"""

import math

import numpy as np
from scipy import special as _sp

__all__ = ["exp_integral_ei", "g1", "bessel_j"]

_SUPPORTED_ORDERS = (1, 3)


def exp_integral_ei(x: float) -> float:
    """Exponential integral Ei(x) for real nonzero x.

    Ei has a logarithmic singularity at the origin, so x = 0 is rejected.
    For x < 0, Ei(x) = -E1(-x) is negative and increasing.
    """
    x = float(x)
    if math.isnan(x):
        raise ValueError("Ei: NaN argument rejected")
    if x == 0.0:
        raise ValueError("Ei is singular at x = 0")
    return float(_sp.expi(x))


def g1(s2: float) -> float:
    """g1(s2) = ln(s2) - Ei(-s2) for s2 > 0.

    Strictly increasing: d/ds2 = (1 - exp(-s2))/s2 > 0. Approaches ln(s2)
    from above as s2 grows, since -Ei(-s2) decays like exp(-s2)/s2.
    """
    s2 = float(s2)
    if not s2 > 0.0:
        raise ValueError(f"g1 requires s2 > 0, got {s2}")
    return math.log(s2) - exp_integral_ei(-s2)


def bessel_j(order: int, x):
    """Bessel function of the first kind J_order for order in {1, 3}.

    Accepts a scalar or an ndarray of nonnegative finite arguments;
    returns the same shape. Only the orders the beam pattern needs are
    supported.
    """
    if order not in _SUPPORTED_ORDERS:
        raise ValueError(
            f"unsupported Bessel order {order!r}; supported orders: {_SUPPORTED_ORDERS}"
        )
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("bessel_j: arguments must be finite")
    if np.any(arr < 0.0):
        raise ValueError("bessel_j: arguments must be nonnegative")
    out = _sp.j1(arr) if order == 1 else _sp.jv(3, arr)
    if np.isscalar(x) or arr.ndim == 0:
        return float(out)
    return out
