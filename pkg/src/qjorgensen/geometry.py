"""Quaternionic hyperbolic space: Hermitian form, ball model, isometries.

Vectors live in H^{n,1} (dimension n+1) with the signature-(n,1) form
<z,w> = w* J z, J = diag(1,...,1,-1).  The space of projectivized negative
vectors is the ball model; interior lifts are normalized so the last
coordinate is 1, making the first n entries the ball coordinates.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DimensionMismatch, NormalizationFailed, NotInGroup,
                     NotInterior, QJorgensenError)
from .qmatrix import QMatrix, euclid_norm, qvec, std_inner
from .quaternion import Quaternion, as_quaternion, from_split
from .tolerances import DEFAULT


@dataclass(frozen=True)
class HermitianSpace:
    """The form carrier: vectors have n positive directions and one negative."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")

    @property
    def dim(self):
        return self.n + 1

    @property
    def form_matrix(self):
        return QMatrix.diag([1.0] * self.n + [-1.0])

    @property
    def signs(self):
        return np.array([1.0] * self.n + [-1.0])


def herm_inner(z, w, space):
    """<z,w> = w* J z = conj(w1) z1 + ... + conj(wn) zn - conj(w_{n+1}) z_{n+1}."""
    if z.shape != (space.dim, 1) or w.shape != (space.dim, 1):
        raise DimensionMismatch(f"vectors must be {space.dim}x1 columns")
    s = space.signs.reshape(-1, 1)
    # conj(w) entrywise is (conj(c1), -c2); elementwise quaternion product, then sum
    a1, a2 = np.conj(w.c1), -w.c2
    p1 = a1 * z.c1 - a2 * np.conj(z.c2)
    p2 = a1 * z.c2 + a2 * np.conj(z.c1)
    return from_split((s * p1).sum(), (s * p2).sum())


def herm_norm(z, space):
    """<z,z>, returned as a real number (imaginary parts cancel exactly)."""
    return herm_inner(z, z, space).re


NEGATIVE, NULL, POSITIVE = "negative", "null", "positive"


@dataclass(frozen=True)
class ProjectivePoint:
    lift: QMatrix
    norm_sign: str

    @property
    def dim(self):
        return self.lift.rows

    def ball_coords(self):
        """First n entries of the (last-coordinate-1) lift, as quaternions."""
        if self.norm_sign == POSITIVE:
            raise NotInterior("positive points have no ball coordinates")
        return [self.lift.entry(i, 0) for i in range(self.dim - 1)]

    def to_dict(self):
        return {"lift": [[q.re, q.i, q.j, q.k] for row in self.lift.quaternions() for q in row]}


def point_from_lift(lift, space, tol=DEFAULT):
    """Classify and normalize a nonzero lift into a ProjectivePoint."""
    if lift.shape != (space.dim, 1):
        raise DimensionMismatch(f"lift must be {space.dim}x1")
    n0 = euclid_norm(lift)
    if n0 < tol.equality:
        raise ValueError("zero lift does not define a projective point")
    unit = lift.scale_real(1.0 / n0)
    val = herm_norm(unit, space)
    if val < -tol.null_norm:
        sign = NEGATIVE
    elif val > tol.null_norm:
        sign = POSITIVE
    else:
        sign = NULL
    if sign in (NEGATIVE, NULL):
        last = unit.entry(space.n, 0)
        if last.modulus() > tol.equality:
            unit = unit.right_mul(last.inverse(tol))
    return ProjectivePoint(lift=unit, norm_sign=sign)


def ball_point(coords, space, tol=DEFAULT):
    """Interior point from ball coordinates (sum of squared moduli < 1)."""
    qs = [as_quaternion(c) for c in coords]
    if len(qs) != space.n:
        raise DimensionMismatch(f"need {space.n} ball coordinates")
    if sum(q.modulus_sq() for q in qs) >= 1.0:
        raise NotInterior("ball coordinates must have squared norm < 1")
    return point_from_lift(qvec(qs + [1.0]), space, tol)


def origin(space):
    return point_from_lift(qvec([0.0] * space.n + [1.0]), space)


def same_point(p, q, tol=1e-9):
    """Projective equality: lifts agree up to a right quaternion scalar."""
    u, v = p.lift, q.lift
    c = std_inner(u, v)  # aligning scalar, since both lifts are near unit scale
    nu = euclid_norm(u) ** 2
    return (v - u.right_mul(Quaternion(c.re / nu, c.i / nu, c.j / nu, c.k / nu))).max_abs() <= tol


@dataclass(frozen=True)
class Isometry:
    """A verified element of Sp(n,1)."""

    matrix: QMatrix
    n: int
    membership_residual: float

    @property
    def space(self):
        return HermitianSpace(self.n)

    def __matmul__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return check_membership(self.matrix @ other.matrix, self.space)

    def to_dict(self):
        return {"matrix": self.matrix.to_dict(), "n": self.n,
                "membership_residual": self.membership_residual}


def _blocks(m, n):
    return (m.block(0, n, 0, n),        # A
            m.block(0, n, n, n + 1),    # alpha (column)
            m.block(n, n + 1, 0, n),    # beta (row)
            m.entry(n, n))              # corner


def membership_report(m, space):
    """Residuals of g*Jg = J and the six block identities of the group.

    With g = [[A, alpha], [beta, a]], membership forces
        A A* - alpha alpha* = I,   -A beta* + alpha conj(a) = 0,
        -|beta|^2 + |a|^2 = 1,
        A* A - beta* beta = I,     A* alpha - beta* a = 0,
        -|alpha|^2 + |a|^2 = 1.
    """
    n = space.n
    if m.shape != (n + 1, n + 1):
        raise DimensionMismatch(f"matrix must be {n + 1}x{n + 1}")
    J = space.form_matrix
    a_blk, alpha, beta, corner = _blocks(m, n)
    eye = QMatrix.identity(n)
    alpha_sq = float((np.abs(alpha.c1) ** 2 + np.abs(alpha.c2) ** 2).sum())
    beta_sq = float((np.abs(beta.c1) ** 2 + np.abs(beta.c2) ** 2).sum())
    corner_sq = corner.modulus_sq()
    res = {
        "form": (m.H @ J @ m - J).max_abs(),
        "AA*-aa*=I": (a_blk @ a_blk.H - alpha @ alpha.H - eye).max_abs(),
        "-Ab*+a.conj(corner)=0": (alpha.right_mul(corner.conjugate()) - a_blk @ beta.H).max_abs(),
        "-|b|^2+|corner|^2=1": abs(corner_sq - beta_sq - 1.0),
        "A*A-b*b=I": (a_blk.H @ a_blk - beta.H @ beta - eye).max_abs(),
        "A*a-b*corner=0": (a_blk.H @ alpha - beta.H.right_mul(corner)).max_abs(),
        "-|a|^2+|corner|^2=1": abs(corner_sq - alpha_sq - 1.0),
    }
    res["worst"] = max(res.values())
    return res


def check_membership(m, space, tol=DEFAULT):
    """Verify Sp(n,1) membership; returns an Isometry or raises NotInGroup."""
    report = membership_report(m, space)
    worst = report["worst"]
    if worst > tol.membership:
        raise NotInGroup(worst)
    return Isometry(matrix=m, n=space.n, membership_residual=worst)


def group_inverse(g, tol=DEFAULT):
    """g^{-1} = J^{-1} g* J, assembled blockwise as [[A*, -b*], [-a*, conj(corner)]]."""
    n = g.n
    a_blk, alpha, beta, corner = _blocks(g.matrix, n)
    ah = a_blk.H
    mb = -beta.H          # column
    ma = -alpha.H         # row
    c1 = np.zeros((n + 1, n + 1), dtype=np.complex128)
    c2 = np.zeros((n + 1, n + 1), dtype=np.complex128)
    c1[:n, :n], c2[:n, :n] = ah.c1, ah.c2
    c1[:n, n:], c2[:n, n:] = mb.c1, mb.c2
    c1[n:, :n], c2[n:, :n] = ma.c1, ma.c2
    cc = corner.conjugate()
    s1, s2 = cc.split()
    c1[n, n], c2[n, n] = s1, s2
    inv = QMatrix(c1, c2, copy=False)
    return check_membership(inv, g.space, tol)


def bergman_cosh2(z, w, space, tol=DEFAULT):
    """cosh^2 of half the Bergman distance: <z,w><w,z> / (<z,z><w,w>).

    Independent of the choice of lifts; >= 1 for interior points, with
    equality exactly when the points coincide.
    """
    if z.norm_sign != NEGATIVE or w.norm_sign != NEGATIVE:
        raise NotInterior("Bergman distance needs two interior points")
    num = herm_inner(z.lift, w.lift, space).modulus_sq()
    den = herm_norm(z.lift, space) * herm_norm(w.lift, space)
    return num / den


def bergman_distance(z, w, space, tol=DEFAULT):
    """rho(z, w) = 2 arccosh(sqrt(cosh^2(rho/2))); derived view of bergman_cosh2."""
    return 2.0 * math.acosh(math.sqrt(max(1.0, bergman_cosh2(z, w, space, tol))))


def apply_isometry(g, p, tol=DEFAULT):
    """Act on a projective point by matrix-times-lift, then renormalize."""
    moved = g.matrix @ p.lift
    out = point_from_lift(moved, g.space, tol)
    if out.norm_sign != p.norm_sign:
        raise QJorgensenError(
            f"isometry changed norm sign {p.norm_sign} -> {out.norm_sign}; "
            "input point is too close to the null cone")
    return out


def j_project_out(x, u, u_norm, space):
    """Remove the J-component of x along u, where <u,u> = u_norm (+-1)."""
    c = herm_inner(x, u, space)
    coef = Quaternion(c.re / u_norm, c.i / u_norm, c.j / u_norm, c.k / u_norm)
    return x - u.right_mul(coef)


def complete_j_basis(u, space, tol=DEFAULT):
    """Complete a <u,u> = -1 lift to B = [b_1 .. b_n, u] with B*JB = J.

    Gram-Schmidt over H against the form, seeded with the standard basis;
    near-dependent candidates are skipped.
    """
    if abs(herm_norm(u, space) + 1.0) > 1e-8:
        raise NormalizationFailed("anchor vector must have Hermitian norm -1")
    basis = []
    for i in range(space.dim):
        cand = qvec([1.0 if r == i else 0.0 for r in range(space.dim)])
        w = j_project_out(cand, u, -1.0, space)
        for b in basis:
            w = j_project_out(w, b, 1.0, space)
        nrm = herm_norm(w, space)
        if nrm > 1e-8:
            basis.append(w.scale_real(1.0 / math.sqrt(nrm)))
        if len(basis) == space.n:
            break
    if len(basis) != space.n:
        raise NormalizationFailed("could not complete a form-orthonormal basis")
    b = QMatrix.from_columns(basis + [u])
    try:
        return check_membership(b, space, tol)
    except NotInGroup as e:
        raise NormalizationFailed(f"completed basis failed membership: {e}") from e
