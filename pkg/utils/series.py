import numpy as np

from errors import DomainError


def _pad(a, m):
    a = np.asarray(a, dtype=complex)[:m]
    return np.pad(a, (0, m - a.size))


def multiply(a, b, m):
    """First m Taylor coefficients of the product a·b."""
    return _pad(np.convolve(_pad(a, m), _pad(b, m)), m)


def divide(a, b, m):
    """First m Taylor coefficients of a/b; b must not vanish at the origin."""
    a, b = _pad(a, m), _pad(b, m)
    if b[0] == 0:
        raise DomainError("series divisor vanishes at the origin")
    c = np.zeros(m, dtype=complex)
    for k in range(m):
        acc = np.dot(b[1:k + 1], c[k - 1::-1]) if k else 0.0
        c[k] = (a[k] - acc) / b[0]
    return c


def integrate(c, constant=0.0):
    """Antiderivative with the given value at the origin."""
    c = np.asarray(c, dtype=complex)
    return np.concatenate([[constant], c / np.arange(1, c.size + 1)])
