"""The SL(2,C) -> Sp(1,1) bridge and the unit-disk distance criterion.

A rotation g = diag(e^{i theta}, e^{-i theta}) together with h in SL(2,C)
embeds into Sp(1,1) by conjugation with T = (1/sqrt 2) [[1, -j], [-j, 1]].
The embedded rotation fixes the disk {t j : |t| < 1} pointwise, and the
displacement of t j under the embedded h is

    cosh^2(rho/2) = f(t)
    f(t) = ( |1-t^2|^2 (|a|^2+|d|^2) + |1+t|^4 |c|^2 + |1-t|^4 |b|^2
             + 2 (conj(t) - t)^2 ) / ( 4 (1-|t|^2)^2 )  +  1/2

where (conj(t) - t)^2 = -4 Im(t)^2 is real.  Three discreteness
screens come out of this: the disk infimum 4 f_inf sin^2(theta), its t=0
specialization sin^2(theta) (|a|^2+|b|^2+|c|^2+|d|^2 + 2), and the
classical two-generator bound 4 sin^2(theta) (1 + |bc|).  A value below 1
means the pair generates a group that is elementary or not discrete.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import EmbeddingFailed, NotInGroup, OutsideDisk
from .geometry import HermitianSpace, check_membership
from .qmatrix import QMatrix
from .tolerances import DEFAULT

_SQ2 = 1.0 / math.sqrt(2.0)

# T and its exact inverse; entries are 1 and -+j scaled by 1/sqrt(2)
_T = QMatrix(np.array([[_SQ2, 0.0], [0.0, _SQ2]]),
             np.array([[0.0, -_SQ2], [-_SQ2, 0.0]]))
_T_INV = QMatrix(np.array([[_SQ2, 0.0], [0.0, _SQ2]]),
                 np.array([[0.0, _SQ2], [_SQ2, 0.0]]))

SPACE = HermitianSpace(1)


@dataclass(frozen=True)
class MobiusPair:
    """Rotation angle theta in (0, pi) plus h = [[a, b], [c, d]], det 1."""

    theta: float
    h: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.complex128)
        if h.shape != (2, 2):
            raise ValueError("h must be a 2x2 complex matrix")
        object.__setattr__(self, "h", h)
        if not 0.0 < self.theta < math.pi:
            raise ValueError("theta must lie in (0, pi)")
        det = h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
        if abs(det - 1.0) > 1e-9:
            raise ValueError(f"determinant {det:.12g} must equal 1")

    @property
    def g(self):
        e = np.exp(1j * self.theta)
        return np.array([[e, 0.0], [0.0, np.conj(e)]])

    def norm_sq(self):
        return float((np.abs(self.h) ** 2).sum())

    def to_dict(self):
        return {"theta": self.theta,
                "h": [[z.real, z.imag] for z in self.h.ravel()]}

    @classmethod
    def from_dict(cls, d):
        flat = [complex(re, im) for re, im in d["h"]]
        return cls(theta=float(d["theta"]), h=np.array(flat).reshape(2, 2))


def embed_matrix(f, tol=DEFAULT):
    """T f T^{-1} for a complex 2x2 matrix f; verified in Sp(1,1)."""
    f = np.asarray(f, dtype=np.complex128)
    qf = QMatrix(f)
    m = _T @ qf @ _T_INV
    try:
        return check_membership(m, SPACE, tol)
    except NotInGroup as e:
        raise EmbeddingFailed(
            f"embedded matrix fails Sp(1,1) membership (residual {e.residual:.3e}); "
            "input is probably not in SL(2,C)") from e


def embed(pair, tol=DEFAULT):
    """Embed (g, h) into Sp(1,1); the rotation passes through unchanged."""
    return embed_matrix(pair.g, tol), embed_matrix(pair.h, tol)


def _f_values(pair, t):
    """Vectorized f(t); no disk validation (callers mask)."""
    t = np.asarray(t, dtype=np.complex128)
    a, b = pair.h[0, 0], pair.h[0, 1]
    c, d = pair.h[1, 0], pair.h[1, 1]
    aa_dd = abs(a) ** 2 + abs(d) ** 2
    t2 = np.abs(t) ** 2
    num = (np.abs(1.0 - t * t) ** 2 * aa_dd
           + np.abs(1.0 + t) ** 4 * abs(c) ** 2
           + np.abs(1.0 - t) ** 4 * abs(b) ** 2
           - 8.0 * np.imag(t) ** 2)
    return num / (4.0 * (1.0 - t2) ** 2) + 0.5


def f_of_t(pair, t):
    """Displacement cosh^2 of t j under the embedded h; real and >= 1."""
    t = complex(t)
    if abs(t) >= 1.0 - 1e-12:
        raise OutsideDisk(f"|t| = {abs(t):.12g} is not inside the open unit disk")
    return float(_f_values(pair, t))


def minimize_f(pair, radial=200, angular=256, refine_from=5):
    """(argmin, min) of f over the open disk: polar grid plus simplex refinement.

    The grid caps the radius at 0.995 (f blows up at the boundary); the
    returned minimum is a certified upper bound on the infimum and exact on
    the grid.  The argmin is reported with nonnegative imaginary part since
    f(conj(t)) = f(t).
    """
    if radial < 8 or angular < 8:
        raise ValueError("grid resolutions must be at least 8")
    r = np.linspace(0.0, 0.995, radial)
    phi = np.linspace(0.0, 2.0 * math.pi, angular, endpoint=False)
    tgrid = r[:, None] * np.exp(1j * phi)[None, :]
    vals = _f_values(pair, tgrid)
    flat = np.argsort(vals, axis=None)

    def objective(xy):
        t = complex(xy[0], xy[1])
        if abs(t) >= 0.9975:
            return np.inf
        return float(_f_values(pair, t))

    best_t = complex(tgrid.flat[flat[0]])
    best_f = float(vals.flat[flat[0]])
    for idx in flat[:refine_from]:
        t0 = complex(tgrid.flat[idx])
        res = optimize.minimize(objective, [t0.real, t0.imag], method="Nelder-Mead",
                                options={"maxfev": 400, "xatol": 1e-12, "fatol": 1e-14})
        if res.fun < best_f:
            best_f = float(res.fun)
            best_t = complex(res.x[0], res.x[1])
    if best_t.imag < 0:
        best_t = best_t.conjugate()
    return best_t, best_f


@dataclass
class CriteriaComparison:
    """The three screens side by side (each < 1 fires its criterion)."""

    f_inf: float
    f_argmin: complex
    thm_value: float        # 4 f_inf sin^2(theta)
    cor_value: float        # sin^2(theta) (|h|^2 + 2)
    classical_value: float  # 4 sin^2(theta) (1 + |bc|)

    def to_dict(self):
        return {
            "f_inf": self.f_inf,
            "f_argmin": [self.f_argmin.real, self.f_argmin.imag],
            "disk_infimum_value": self.thm_value,
            "norm_value": self.cor_value,
            "classical_value": self.classical_value,
        }


def compare_criteria(pair, radial=200, angular=256):
    """Evaluate all three discreteness screens for a MobiusPair."""
    argmin, f_inf = minimize_f(pair, radial=radial, angular=angular)
    s2 = math.sin(pair.theta) ** 2
    bc = pair.h[0, 1] * pair.h[1, 0]
    return CriteriaComparison(
        f_inf=f_inf,
        f_argmin=argmin,
        thm_value=4.0 * f_inf * s2,
        cor_value=s2 * (pair.norm_sq() + 2.0),
        classical_value=4.0 * s2 * (1.0 + abs(bc)),
    )
