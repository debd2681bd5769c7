"""Deterministic quasi-uniform sampling of the unit 3-sphere.

The lattice lifts the plastic-constant low-discrepancy sequence through
Hopf coordinates: with u uniform in (0,1) and two independent uniform
angles, (sqrt(1-u) e^{i phi1}, sqrt(u) e^{i phi2}) is Haar-uniform on S^3.
Seedless and reproducible bit-for-bit for a given sample count.
"""

import numpy as np

# real root of x^3 = x + 1
_PLASTIC = 1.324717957244746

_cache = {}


def s3_lattice(n):
    """Return (w0, w1, w2, w3) float arrays: n quasi-uniform unit quaternions.

    Component pairs (w0, w1) and (w2, w3) are the complex split, so
    |w2|^2 + |w3|^2 sweeps (0, 1) with stride 1/n.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if n in _cache:
        return _cache[n]
    k = np.arange(n, dtype=np.float64)
    u = (k + 0.5) / n
    phi1 = 2.0 * np.pi * np.mod(k / _PLASTIC, 1.0)
    phi2 = 2.0 * np.pi * np.mod(k / (_PLASTIC * _PLASTIC), 1.0)
    r1 = np.sqrt(1.0 - u)
    r2 = np.sqrt(u)
    out = (r1 * np.cos(phi1), r1 * np.sin(phi1), r2 * np.cos(phi2), r2 * np.sin(phi2))
    for a in out:
        a.setflags(write=False)
    if len(_cache) > 4:
        _cache.clear()
    _cache[n] = out
    return out
