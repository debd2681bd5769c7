"""Eigenvalue-class analysis of elliptic isometries.

An elliptic g (one fixing an interior point) diagonalizes over H to unit
eigenvalue classes: n of positive type and exactly one of negative type,
where the type is the sign of the Hermitian norm of the eigenvector.  The
separation invariant is

    delta(g) = max_i max( 4 sin^2((theta_i + theta_neg)/2),
                          4 sin^2((theta_i - theta_neg)/2) )

over the positive class angles theta_i, equivalently the largest squared
distance |lambda_i - lambda_neg|^2 over the similarity classes.  The
brute-force oracle below maximizes that squared distance directly over a
deterministic lattice of unit-quaternion conjugators and converges to the
closed form from below.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousTypes, EigenSolverError, NotElliptic, NotInterior
from .geometry import HermitianSpace, ProjectivePoint, herm_inner, herm_norm, point_from_lift
from .qmatrix import (QMatrix, complex_adjoint, euclid_norm, qvec,
                      right_eigenpairs, std_inner)
from .quaternion import Quaternion, as_quaternion, from_split
from .sphere import s3_lattice
from .tolerances import DEFAULT

POSITIVE_TYPE, NEGATIVE_TYPE = "positive", "negative"
REGULAR, BOUNDARY = "regular", "boundary"


@dataclass
class SimilarityClass:
    angle: float
    modulus: float
    multiplicity: int
    type_tag: str
    eigenvectors: list  # column QMatrix lifts, J-normalized to <v,v> = +-1

    def to_dict(self):
        return {
            "angle": self.angle,
            "modulus": self.modulus,
            "multiplicity": self.multiplicity,
            "type": self.type_tag,
        }


@dataclass
class EllipticProfile:
    element: object            # Isometry
    classes: list              # SimilarityClass, sorted by (angle, type)
    negative_index: int
    delta: float
    kind: str                  # REGULAR or BOUNDARY
    fixed_set_dimension: int

    @property
    def negative_class(self):
        return self.classes[self.negative_index]

    def positive_classes(self):
        return [c for i, c in enumerate(self.classes) if i != self.negative_index]

    def to_dict(self):
        return {
            "classes": [c.to_dict() for c in self.classes],
            "negative_index": self.negative_index,
            "delta": self.delta,
            "kind": self.kind,
            "fixed_set_dimension": self.fixed_set_dimension,
        }


def delta_closed_form(theta_i, theta_neg):
    """max(4 sin^2((ti+tn)/2), 4 sin^2((ti-tn)/2)); symmetric in its arguments."""
    for t in (theta_i, theta_neg):
        if not -1e-12 <= t <= math.pi + 1e-12:
            raise ValueError("angles must lie in [0, pi]")
    sp = math.sin(0.5 * (theta_i + theta_neg))
    sm = math.sin(0.5 * (theta_i - theta_neg))
    return max(4.0 * sp * sp, 4.0 * sm * sm)


def delta_bruteforce_oracle(theta_i, theta_neg, samples=100_000):
    """Sampled maximum of |e^{i ti} - w e^{i tn} w^{-1}|^2 over unit w.

    Uses the deterministic S^3 lattice, so results are reproducible
    bit-for-bit.  Always a lower bound on the closed form; converges as the
    lattice refines because the objective depends linearly on |w_2|^2.
    """
    for t in (theta_i, theta_neg):
        if not -1e-12 <= t <= math.pi + 1e-12:
            raise ValueError("angles must lie in [0, pi]")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    a, b, c, d = s3_lattice(samples)
    x, y = math.cos(theta_neg), math.sin(theta_neg)
    # p = w * (x + y i), then s = p * conj(w); unit w so conj(w) = w^{-1}
    p0 = a * x - b * y
    p1 = a * y + b * x
    p2 = c * x + d * y
    p3 = d * x - c * y
    s0 = p0 * a + p1 * b + p2 * c + p3 * d
    s1 = -p0 * b + p1 * a - p2 * d + p3 * c
    s2 = -p0 * c + p1 * d + p2 * a - p3 * b
    s3 = -p0 * d - p1 * c + p2 * b + p3 * a
    ti_re, ti_im = math.cos(theta_i), math.sin(theta_i)
    dist_sq = (ti_re - s0) ** 2 + (ti_im - s1) ** 2 + s2 ** 2 + s3 ** 2
    return float(dist_sq.max())


def _gram(space, vectors):
    """J-Gram matrix: G[b,a] = <v_a, v_b>, so <sum v_a c_a, ...> = c* G c."""
    w = QMatrix.from_columns(vectors)
    return w.H @ space.form_matrix @ w


def _gs_select_coeffs(cands, expect):
    """Orthonormalize coefficient columns over H, keeping `expect` of them."""
    kept = []
    for cand in cands:
        w = cand
        n0 = euclid_norm(w)
        if n0 <= 0.0:
            continue
        w = w.scale_real(1.0 / n0)
        for b in kept:
            w = w - b.right_mul(std_inner(b, w))
        n = euclid_norm(w)
        if n > 1e-6:
            kept.append(w.scale_real(1.0 / n))
        if len(kept) == expect:
            break
    if len(kept) != expect:
        raise EigenSolverError("eigenspace basis selection lost rank")
    return kept


def _form_diagonalize_cluster(space, vectors, real_angle):
    """J-orthogonal basis of a joint eigenspace, with the form's signs.

    Input vectors share one canonical eigenvalue.  Returns [(u, nu)] where
    <u_a, u_b> = nu_a * delta_ab.  Plain Gram-Schmidt cannot be used: for a
    mixed-signature eigenspace a pivot can be isotropic, so we diagonalize
    the restricted Hermitian form instead.  For a non-real eigenvalue the
    Gram matrix is forced into the complex centralizer, and a complex
    eigendecomposition suffices; for a real eigenvalue the form is genuinely
    quaternionic and is doubled first.
    """
    m = len(vectors)
    gram = _gram(space, vectors)
    v = QMatrix.from_columns(vectors)
    out = []
    if not real_angle:
        if float(np.abs(gram.c2).max()) > 1e-7:
            raise EigenSolverError("non-complex Gram matrix for a non-real eigenvalue")
        herm = 0.5 * (gram.c1 + np.conj(gram.c1.T))
        mu, wc = np.linalg.eigh(herm)
        for a in range(m):
            coeff = QMatrix(wc[:, a].reshape(-1, 1))
            out.append(v @ coeff)
    else:
        chi = complex_adjoint(gram)
        chi = 0.5 * (chi + np.conj(chi.T))
        mu2, wc2 = np.linalg.eigh(chi)
        scale = max(1.0, float(np.abs(mu2).max()))
        groups = []
        for idx in range(2 * m):
            if groups and abs(mu2[idx] - mu2[groups[-1][-1]]) <= 1e-8 * scale:
                groups[-1].append(idx)
            else:
                groups.append([idx])
        coeffs = []
        for grp in groups:
            cands = []
            for idx in grp:
                u = wc2[:, idx]
                x = u[:m].reshape(-1, 1)
                y = u[m:].reshape(-1, 1)
                cands.append(QMatrix(x, -np.conj(y)))
            if len(grp) % 2:
                raise EigenSolverError("doubled Hermitian spectrum has odd multiplicity")
            coeffs.extend(_gs_select_coeffs(cands, len(grp) // 2))
        for coeff in coeffs:
            out.append(v @ coeff)
    result = []
    for u in out:
        n0 = euclid_norm(u)
        if n0 <= 1e-12:
            raise EigenSolverError("degenerate direction in eigenspace diagonalization")
        u = u.scale_real(1.0 / n0)
        result.append((u, herm_norm(u, space)))
    return result


def analyze_elliptic(g, tol=DEFAULT):
    """Full eigenvalue-class analysis of a verified elliptic isometry.

    Raises NotElliptic when some eigenvalue modulus leaves the unit circle
    or no eigenvector carries negative Hermitian norm; raises AmbiguousTypes
    when the most negative norm is too close to zero to classify.
    """
    space = g.space
    pairs = right_eigenpairs(g.matrix, tol)
    for p in pairs:
        if abs(abs(p.value) - 1.0) > tol.unit_modulus:
            raise NotElliptic(
                f"eigenvalue modulus {abs(p.value):.12f} deviates from 1; "
                "element is not elliptic")

    # cluster by canonical angle
    pairs = sorted(pairs, key=lambda p: math.atan2(p.value.imag, p.value.real))
    clusters = []
    for p in pairs:
        ang = math.atan2(p.value.imag, p.value.real)
        if clusters and ang - clusters[-1]["angles"][-1] <= tol.angle_cluster:
            clusters[-1]["angles"].append(ang)
            clusters[-1]["pairs"].append(p)
        else:
            clusters.append({"angles": [ang], "pairs": [p]})

    analyzed = []
    most_negative = np.inf
    for cl in clusters:
        angle = float(np.mean(cl["angles"]))
        real_angle = angle <= tol.angle_cluster or angle >= math.pi - tol.angle_cluster
        vectors = [p.vector for p in cl["pairs"]]
        diag = _form_diagonalize_cluster(space, vectors, real_angle)
        cl["angle"] = angle
        cl["diag"] = diag
        cl["modulus"] = float(np.mean([abs(p.value) for p in cl["pairs"]]))
        for _, nu in diag:
            most_negative = min(most_negative, nu)
        analyzed.append(cl)

    if most_negative > tol.type_assign:
        raise NotElliptic("no eigenvector of negative Hermitian norm; no interior fixed point")
    if most_negative > -tol.type_assign:
        raise AmbiguousTypes(
            f"most negative eigenvector norm {most_negative:.3e} straddles zero")

    classes = []
    negative_index = -1
    for cl in analyzed:
        pos, neg = [], []
        for u, nu in cl["diag"]:
            if nu < 0:
                neg.append((u, nu))
            else:
                pos.append((u, nu))
        if neg and min(nu for _, nu in neg) == most_negative:
            if len(neg) != 1:
                raise AmbiguousTypes("more than one negative direction; signature violated")
            u, nu = neg[0]
            if pos:
                classes.append(SimilarityClass(
                    angle=cl["angle"], modulus=cl["modulus"], multiplicity=len(pos),
                    type_tag=POSITIVE_TYPE,
                    eigenvectors=[v.scale_real(1.0 / math.sqrt(nv)) for v, nv in pos]))
            negative_index = len(classes)
            classes.append(SimilarityClass(
                angle=cl["angle"], modulus=cl["modulus"], multiplicity=1,
                type_tag=NEGATIVE_TYPE,
                eigenvectors=[u.scale_real(1.0 / math.sqrt(-nu))]))
        else:
            if neg:
                raise AmbiguousTypes("negative direction outside the minimal class")
            classes.append(SimilarityClass(
                angle=cl["angle"], modulus=cl["modulus"], multiplicity=len(pos),
                type_tag=POSITIVE_TYPE,
                eigenvectors=[v.scale_real(1.0 / math.sqrt(nv)) for v, nv in pos]))

    if negative_index < 0:
        raise NotElliptic("no negative-type class found")
    total = sum(c.multiplicity for c in classes)
    if total != space.dim:
        raise EigenSolverError(f"class multiplicities sum to {total}, expected {space.dim}")

    neg_angle = classes[negative_index].angle
    coincident = [c for i, c in enumerate(classes)
                  if i != negative_index and abs(c.angle - neg_angle) <= tol.angle_cluster]
    delta = 0.0
    for i, c in enumerate(classes):
        if i == negative_index:
            continue
        delta = max(delta, delta_closed_form(min(max(c.angle, 0.0), math.pi),
                                             min(max(neg_angle, 0.0), math.pi)))
    kind = BOUNDARY if coincident else REGULAR
    fixed_dim = sum(c.multiplicity for c in coincident)

    return EllipticProfile(
        element=g, classes=classes, negative_index=negative_index,
        delta=delta, kind=kind, fixed_set_dimension=fixed_dim)


@dataclass
class FixedSetDescription:
    """Interior fixed locus of an elliptic element.

    `basis` lists J-orthonormal eigenvector lifts: the negative one first
    (<u,u> = -1), then the positive ones of the coincident class (+1 each).
    Interior fixed points are exactly the combinations basis . (1, c_1..c_m)
    with |c| < 1, coefficients drawn from `coefficient_field` ('complex'
    when the shared eigenvalue is non-real, 'quaternion' when it is real).
    """

    kind: str
    dimension: int
    angle: float
    basis: list
    coefficient_field: str
    space: HermitianSpace

    @property
    def parameter_dim(self):
        return (2 if self.coefficient_field == "complex" else 4) * self.dimension

    def interior_point(self, coeffs, tol=DEFAULT):
        coeffs = [as_quaternion(c) for c in coeffs]
        if len(coeffs) != self.dimension:
            raise ValueError(f"need {self.dimension} coefficients")
        if self.coefficient_field == "complex":
            for c in coeffs:
                if abs(c.j) > 1e-12 or abs(c.k) > 1e-12:
                    raise ValueError("coefficients must be complex for a non-real eigenvalue")
        if sum(c.modulus_sq() for c in coeffs) >= 1.0:
            raise NotInterior("coefficient vector must have squared norm < 1")
        lift = self.basis[0]
        for u, c in zip(self.basis[1:], coeffs):
            lift = lift + u.right_mul(c)
        return point_from_lift(lift, self.space, tol)

    def point_from_params(self, params):
        """Map a flat real parameter vector to coefficients; may raise NotInterior."""
        k = 2 if self.coefficient_field == "complex" else 4
        coeffs = []
        for a in range(self.dimension):
            chunk = params[k * a : k * (a + 1)]
            if k == 2:
                coeffs.append(Quaternion(chunk[0], chunk[1], 0.0, 0.0))
            else:
                coeffs.append(Quaternion(chunk[0], chunk[1], chunk[2], chunk[3]))
        return self.interior_point(coeffs)

    def sample_interior(self, count, seed=0):
        """Deterministic interior fixed points, radius <= 0.9."""
        if self.dimension == 0:
            return [self.interior_point([])] * count
        rng = np.random.default_rng(seed)
        k = 2 if self.coefficient_field == "complex" else 4
        out = []
        for _ in range(count):
            raw = rng.normal(size=k * self.dimension)
            norm = math.sqrt(float((raw ** 2).sum()))
            radius = 0.9 * rng.uniform() ** (1.0 / (k * self.dimension))
            out.append(self.point_from_params(raw * (radius / max(norm, 1e-12))))
        return out


def fixed_points(profile, tol=DEFAULT):
    """Describe the interior fixed-point set of an analyzed elliptic element."""
    neg = profile.negative_class
    u0 = neg.eigenvectors[0]
    basis = [u0]
    neg_angle = neg.angle
    for i, c in enumerate(profile.classes):
        if i == profile.negative_index or c.type_tag != POSITIVE_TYPE:
            continue
        if abs(c.angle - neg_angle) <= tol.angle_cluster:
            basis.extend(c.eigenvectors)
    real_angle = neg_angle <= tol.angle_cluster or neg_angle >= math.pi - tol.angle_cluster
    # coefficients on the j-span of the shared eigenvalue: complex numbers act
    # through the centralizer, so only a real eigenvalue admits the full H
    field = "quaternion" if real_angle else "complex"
    dim = len(basis) - 1
    kind = BOUNDARY if dim > 0 else REGULAR
    return FixedSetDescription(
        kind=kind, dimension=dim, angle=neg_angle, basis=basis,
        coefficient_field=field, space=profile.element.space)
