"""Dense matrices over the quaternions.

Storage is the complex split M = M1 + M2*j with two complex128 arrays,
which turns Hamilton-product accumulation into four complex matrix
products and makes the complex-adjoint doubling (the standard device for
right eigenvalues) a block assembly:

    adjoint(M) = [[M1, M2], [-conj(M2), conj(M1)]]

The adjoint is an algebra homomorphism; eigenvalues of the adjoint occur
in conjugate pairs, and each pair corresponds to one right-eigenvalue
similarity class of M.  A complex adjoint eigenvector (x; y) with value
lam pulls back to the quaternionic right eigenvector v = x - conj(y)*j,
satisfying M v = v lam.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EigenSolverError
from .quaternion import Quaternion, as_quaternion, from_split
from .tolerances import DEFAULT


def _smul(a1, a2, b1, b2):
    """Split product: (a1 + a2 j)(b1 + b2 j) with elementwise complex arrays."""
    return a1 * b1 - a2 * np.conj(b2), a1 * b2 + a2 * np.conj(b1)


class QMatrix:
    """Immutable dense quaternionic matrix."""

    __slots__ = ("c1", "c2")

    def __init__(self, c1, c2=None, copy=True):
        c1 = np.array(c1, dtype=np.complex128, copy=copy)
        if c2 is None:
            c2 = np.zeros_like(c1)
        else:
            c2 = np.array(c2, dtype=np.complex128, copy=copy)
        if c1.ndim != 2 or c1.shape != c2.shape:
            raise DimensionMismatch("split parts must be equal-shape 2-D arrays")
        if not (np.all(np.isfinite(c1)) and np.all(np.isfinite(c2))):
            raise ValueError("matrix entries must be finite")
        c1.setflags(write=False)
        c2.setflags(write=False)
        self.c1 = c1
        self.c2 = c2

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_quaternions(cls, rows):
        """Build from a nested sequence of quaternion-like entries."""
        qs = [[as_quaternion(e) for e in row] for row in rows]
        r = len(qs)
        c = len(qs[0]) if r else 0
        if any(len(row) != c for row in qs):
            raise DimensionMismatch("ragged rows")
        c1 = np.empty((r, c), dtype=np.complex128)
        c2 = np.empty((r, c), dtype=np.complex128)
        for a, row in enumerate(qs):
            for b, q in enumerate(row):
                s1, s2 = q.split()
                c1[a, b] = s1
                c2[a, b] = s2
        return cls(c1, c2, copy=False)

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n, dtype=np.complex128), copy=False)

    @classmethod
    def zeros(cls, r, c):
        return cls(np.zeros((r, c), dtype=np.complex128), copy=False)

    @classmethod
    def diag(cls, values):
        qs = [as_quaternion(v) for v in values]
        n = len(qs)
        c1 = np.zeros((n, n), dtype=np.complex128)
        c2 = np.zeros((n, n), dtype=np.complex128)
        for a, q in enumerate(qs):
            c1[a, a], c2[a, a] = q.split()
        return cls(c1, c2, copy=False)

    @classmethod
    def from_columns(cls, columns):
        """Assemble a matrix from column QMatrix vectors."""
        c1 = np.hstack([col.c1 for col in columns])
        c2 = np.hstack([col.c2 for col in columns])
        return cls(c1, c2, copy=False)

    # -- shape and access -------------------------------------------------

    @property
    def rows(self):
        return self.c1.shape[0]

    @property
    def cols(self):
        return self.c1.shape[1]

    @property
    def shape(self):
        return self.c1.shape

    def entry(self, i, j):
        return from_split(self.c1[i, j], self.c2[i, j])

    def quaternions(self):
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def column(self, j):
        return QMatrix(self.c1[:, j : j + 1], self.c2[:, j : j + 1])

    def block(self, r0, r1, c0, c1):
        return QMatrix(self.c1[r0:r1, c0:c1], self.c2[r0:r1, c0:c1])

    # -- algebra -----------------------------------------------------------

    def __matmul__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        p1 = self.c1 @ other.c1 - self.c2 @ np.conj(other.c2)
        p2 = self.c1 @ other.c2 + self.c2 @ np.conj(other.c1)
        return QMatrix(p1, p2, copy=False)

    def __add__(self, other):
        return QMatrix(self.c1 + other.c1, self.c2 + other.c2, copy=False)

    def __sub__(self, other):
        return QMatrix(self.c1 - other.c1, self.c2 - other.c2, copy=False)

    def __neg__(self):
        return QMatrix(-self.c1, -self.c2, copy=False)

    def scale_real(self, s):
        s = float(s)
        return QMatrix(self.c1 * s, self.c2 * s, copy=False)

    def right_mul(self, q):
        """M q with a quaternion scalar on the right (columns scale on the right)."""
        s1, s2 = as_quaternion(q).split()
        p1, p2 = _smul(self.c1, self.c2, s1, s2)
        return QMatrix(p1, p2, copy=False)

    def left_mul(self, q):
        """q * M with a quaternion scalar acting on the left."""
        s1, s2 = as_quaternion(q).split()
        p1, p2 = _smul(np.full_like(self.c1, s1), np.full_like(self.c2, s2), self.c1, self.c2)
        return QMatrix(p1, p2, copy=False)

    @property
    def H(self):
        """Conjugate transpose."""
        return QMatrix(np.conj(self.c1.T), -self.c2.T)

    # -- norms and comparison ----------------------------------------------

    def abs_entries(self):
        return np.sqrt(np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2)

    def max_abs(self):
        if self.c1.size == 0:
            return 0.0
        return float(self.abs_entries().max())

    def frobenius(self):
        return float(np.sqrt((np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2).sum()))

    def approx_equal(self, other, atol=1e-12):
        return (self - other).max_abs() <= atol

    def __repr__(self):
        return f"QMatrix({self.quaternions()!r})"

    # -- serialization ------------------------------------------------------

    def to_dict(self):
        entries = []
        for i in range(self.rows):
            for j in range(self.cols):
                q = self.entry(i, j)
                entries.append([q.re, q.i, q.j, q.k])
        return {"rows": self.rows, "cols": self.cols, "entries": entries}

    @classmethod
    def from_dict(cls, d):
        r, c = int(d["rows"]), int(d["cols"])
        entries = d["entries"]
        if len(entries) != r * c:
            raise DimensionMismatch("entry count does not match rows*cols")
        rows = [[entries[i * c + j] for j in range(c)] for i in range(r)]
        return cls.from_quaternions(rows)


def qmat_multiply(a, b):
    return a @ b


def conjugate_transpose(m):
    return m.H


def complex_adjoint(m):
    """The doubled complex matrix [[M1, M2], [-conj(M2), conj(M1)]]."""
    return np.block([[m.c1, m.c2], [-np.conj(m.c2), np.conj(m.c1)]])


def from_complex_adjoint(arr, atol=1e-9):
    """Inverse of complex_adjoint; validates the block structure."""
    arr = np.asarray(arr, dtype=np.complex128)
    r2, c2 = arr.shape
    if r2 % 2 or c2 % 2:
        raise DimensionMismatch("adjoint matrix must have even dimensions")
    r, c = r2 // 2, c2 // 2
    m1 = arr[:r, :c]
    m2 = arr[:r, c:]
    scale = max(1.0, float(np.abs(arr).max()))
    if (np.abs(arr[r:, :c] + np.conj(m2)).max() > atol * scale
            or np.abs(arr[r:, c:] - np.conj(m1)).max() > atol * scale):
        raise ValueError("array does not have complex-adjoint block structure")
    return QMatrix(m1, m2)


def inverse_via_adjoint(m, atol=1e-7):
    """Invert through the complex adjoint (homomorphism => structure survives)."""
    if m.rows != m.cols:
        raise DimensionMismatch("inverse needs a square matrix")
    inv = np.linalg.inv(complex_adjoint(m))
    return from_complex_adjoint(inv, atol=atol)


def qvec(entries):
    """Column vector from a flat sequence of quaternion-like entries."""
    return QMatrix.from_quaternions([[e] for e in entries])


def std_inner(u, v):
    """Standard (positive) inner product u^* v of two column vectors."""
    p1, p2 = _smul(np.conj(u.c1), -u.c2, v.c1, v.c2)
    return from_split(p1.sum(), p2.sum())


def euclid_norm(u):
    return float(np.sqrt((np.abs(u.c1) ** 2 + np.abs(u.c2) ** 2).sum()))


def std_gram_schmidt(columns, drop_tol=1e-6):
    """Orthonormalize column vectors over H (right-scalar convention).

    Candidates whose residual after projection has norm below drop_tol are
    discarded, so the result is a well-conditioned orthonormal basis of the
    span.
    """
    basis = []
    for cand in columns:
        w = cand
        n0 = euclid_norm(w)
        if n0 <= 0.0:
            continue
        w = w.scale_real(1.0 / n0)
        for b in basis:
            w = w - b.right_mul(std_inner(b, w))
        n = euclid_norm(w)
        if n > drop_tol:
            basis.append(w.scale_real(1.0 / n))
    return basis


@dataclass
class RightEigenpair:
    """Canonical right eigenvalue with a verified quaternionic eigenvector."""

    value: complex
    vector: QMatrix
    residual: float


def _recover_vector(u):
    """Quaternionic vector from an adjoint eigenvector stacked as (x; y)."""
    d = u.shape[0] // 2
    x = u[:d].reshape(-1, 1)
    y = u[d:].reshape(-1, 1)
    return QMatrix(x, -np.conj(y))


def _eigen_residual(m, v, lam):
    lv = v.right_mul(Quaternion(lam.real, lam.imag))
    return (m @ v - lv).max_abs()


def _canonical_phase(v, tol=1e-12):
    """Right-multiply by a unit complex phase for a deterministic representative."""
    for i in range(v.rows):
        a = v.c1[i, 0]
        if abs(a) > tol:
            return v.right_mul(complex(np.conj(a) / abs(a)))
        b = v.c2[i, 0]
        if abs(b) > tol:
            return v.right_mul(complex(b / abs(b)))
    return v


def right_eigenpairs(m, tol=DEFAULT):
    """All right-eigenvalue classes of a square quaternionic matrix.

    Eigenvalues of the complex adjoint are matched into conjugate pairs
    (aborts if the spectrum is not conjugation-closed within tolerance);
    each pair yields one canonical value with nonnegative imaginary part.
    Returned vectors are unit norm, phase-canonicalized, and re-verified in
    the quaternions: max-norm of M v - v lam stays below tolerance.
    """
    if m.rows != m.cols:
        raise DimensionMismatch("eigenpairs need a square matrix")
    d = m.rows
    chi = complex_adjoint(m)
    try:
        vals, vecs = np.linalg.eig(chi)
    except np.linalg.LinAlgError as e:
        raise EigenSolverError(f"complex eigensolver failed: {e}") from e
    if not np.all(np.isfinite(vals)):
        raise EigenSolverError("non-finite eigenvalues")

    order = list(np.lexsort((vals.imag, vals.real)))
    pairs = []  # (lam, index_im_nonneg, index_other)
    unmatched = order
    while unmatched:
        a = unmatched.pop(0)
        target = np.conj(vals[a])
        best_pos, best_d = -1, np.inf
        for pos, b in enumerate(unmatched):
            dist = abs(vals[b] - target)
            if dist < best_d:
                best_pos, best_d = pos, dist
        if best_pos < 0 or best_d > tol.pair_match * max(1.0, abs(vals[a])):
            raise EigenSolverError(
                "adjoint spectrum is not closed under conjugation "
                f"(unpaired value {vals[a]:.6g}, best gap {best_d:.3e})")
        b = unmatched.pop(best_pos)
        lam = complex(0.5 * (vals[a].real + vals[b].real),
                      0.5 * abs(vals[a].imag - vals[b].imag))
        hi, lo = (a, b) if vals[a].imag >= vals[b].imag else (b, a)
        pairs.append((lam, hi, lo))

    pairs.sort(key=lambda p: (np.angle(p[0]), p[0].real, p[0].imag))

    # cluster pairs sharing a canonical value, then pick per-cluster vectors
    clusters = []
    for p in pairs:
        if clusters and abs(p[0] - clusters[-1][-1][0]) <= tol.pair_match * max(1.0, abs(p[0])):
            clusters[-1].append(p)
        else:
            clusters.append([p])

    out = []
    for cluster in clusters:
        mult = len(cluster)
        lam = cluster[0][0]
        own = [_recover_vector(vecs[:, hi]) for (_, hi, _) in cluster]
        chosen = own
        if mult > 1:
            # try to extract a spanning orthonormal set from all 2*mult copies
            cands = []
            for (_, hi, lo) in cluster:
                cands.append(_recover_vector(vecs[:, hi]))
                cands.append(_recover_vector(vecs[:, lo]))
            accepted = []
            for cand in cands:
                w = cand
                n0 = euclid_norm(w)
                if n0 <= 0.0:
                    continue
                w = w.scale_real(1.0 / n0)
                for b in accepted:
                    w = w - b.right_mul(std_inner(b, w))
                n = euclid_norm(w)
                if n > 1e-6:
                    w = w.scale_real(1.0 / n)
                    if _eigen_residual(m, w, lam) <= tol.equality * max(1.0, m.max_abs()):
                        accepted.append(w)
                if len(accepted) == mult:
                    break
            if accepted:
                chosen = [accepted[t % len(accepted)] for t in range(mult)]
        for t in range(mult):
            v = chosen[t % len(chosen)]
            v = v.scale_real(1.0 / euclid_norm(v))
            v = _canonical_phase(v)
            res = _eigen_residual(m, v, lam)
            if res > tol.equality * max(1.0, m.max_abs()):
                raise EigenSolverError(
                    f"eigenpair residual {res:.3e} exceeds tolerance for value {lam:.6g}")
            out.append(RightEigenpair(value=lam, vector=v, residual=res))

    if len(out) != d:
        raise EigenSolverError(f"expected {d} eigenvalue classes, derived {len(out)}")
    return out
