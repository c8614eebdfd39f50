from functools import lru_cache

from scipy.special import roots_legendre


@lru_cache(maxsize=8)
def gauss_legendre_unit(nodes):
    """Gauss–Legendre nodes and weights mapped to [0, 1]; cached read-only arrays."""
    x, w = roots_legendre(nodes)
    t = 0.5 * (x + 1.0)
    w = 0.5 * w
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w
