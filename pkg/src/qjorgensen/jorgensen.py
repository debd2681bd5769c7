"""Two-generator discreteness screening with an elliptic generator.

The test evaluates

    product = cosh^2( rho(q, h(q)) / 2 ) * delta(g),   q in Fix(g),

at the best available fixed point q of the elliptic g.  If the product is
below 1, conjugate so g = diag(lambda_1..lambda_{n+1}) fixes the origin and
run h_{k+1} = h_k g h_k^{-1}.  Writing c_k for the squared corner modulus
of h_k, group membership forces c_k - 1 = |beta_k|^2 >= 0 and the recursion
contracts:

    c_{k+1} - 1 <= (c_k - 1) * c_k * delta(g)

so c_k -> 1 geometrically (ratio at most the product).  A vanishing beta at
the start means h fixes q and the pair is elementary; otherwise the
iterates form an infinite sequence of distinct group elements converging to
a block-diagonal limit, which rules out discreteness.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .elliptic import analyze_elliptic, delta_closed_form, fixed_points
from .errors import NormalizationFailed, NotInGroup, NotInterior, QJorgensenError
from .geometry import (NEGATIVE, apply_isometry, bergman_cosh2, check_membership,
                       complete_j_basis, group_inverse, herm_norm, origin,
                       point_from_lift, same_point)
from .qmatrix import QMatrix, euclid_norm, right_eigenpairs
from .quaternion import class_representative, standardize_conjugator
from .tolerances import DEFAULT

EXACT, UPPER_BOUND = "exact", "numeric-upper-bound"
ELEMENTARY, NOT_DISCRETE, INCONCLUSIVE = "elementary", "not_discrete", "inconclusive"
CONVERGED, ELEMENTARY_DETECTED, MAX_STEPS, DIVERGED = (
    "converged", "elementary_detected", "max_steps", "diverged")


@dataclass
class CriterionValue:
    cosh2: float
    delta: float
    product: float
    witness_point: object       # ProjectivePoint
    attained: str               # EXACT or UPPER_BOUND

    def to_dict(self):
        return {"cosh2": self.cosh2, "delta": self.delta, "product": self.product,
                "attained": self.attained, "witness": self.witness_point.to_dict()}


@dataclass
class IterationStep:
    k: int
    corner_modulus_sq: float
    beta_norm: float
    contraction_ok: bool


@dataclass
class IterationTrace:
    steps: list
    terminal: str
    distinct_count: int = 0
    hypothesis_product: float = math.nan

    def to_dict(self):
        return {
            "terminal": self.terminal,
            "distinct_count": self.distinct_count,
            "hypothesis_product": self.hypothesis_product,
            "steps": [{"k": s.k, "corner_modulus_sq": s.corner_modulus_sq,
                       "beta_norm": s.beta_norm, "contraction_ok": s.contraction_ok}
                      for s in self.steps],
        }


@dataclass
class TestReport:
    verdict: str
    criterion: CriterionValue
    trace: IterationTrace = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {"verdict": self.verdict, "criterion": self.criterion.to_dict(),
                "trace": self.trace.to_dict() if self.trace else None,
                "notes": list(self.notes)}


def normalize_to_origin(g, h, q, tol=DEFAULT):
    """Conjugate both elements by a group element sending q to the origin.

    The conjugator is built by completing q's (-1)-normalized lift to a
    form-orthonormal basis, so the conjugated g fixes the origin and has
    block-diagonal shape.
    """
    if q.norm_sign != NEGATIVE:
        raise NormalizationFailed("only interior points can be moved to the origin")
    space = g.space
    u = q.lift
    nu = herm_norm(u, space)
    if nu >= 0:
        raise NormalizationFailed("lift is not negative")
    u = u.scale_real(1.0 / math.sqrt(-nu))
    b = complete_j_basis(u, space, tol)
    s = group_inverse(b, tol)
    g2 = check_membership(s.matrix @ g.matrix @ b.matrix, space, tol)
    h2 = check_membership(s.matrix @ h.matrix @ b.matrix, space, tol)
    return g2, h2


def _diagonalize_at_origin(g, h, tol=DEFAULT):
    """Bring an origin-fixing elliptic g to diagonal form, carrying h along."""
    space = g.space
    n = space.n
    m = g.matrix
    off = max(m.block(0, n, n, n + 1).max_abs(), m.block(n, n + 1, 0, n).max_abs())
    if off > 1e-8:
        raise NormalizationFailed(f"element does not fix the origin (off-block {off:.3e})")
    a_blk = m.block(0, n, 0, n)
    pairs = right_eigenpairs(a_blk, tol)
    u = QMatrix.from_columns([p.vector for p in pairs])
    if (u.H @ u - QMatrix.identity(n)).max_abs() > 1e-8:
        raise NormalizationFailed("eigenbasis of the rotation block is not unitary")
    w = standardize_conjugator(m.entry(n, n), tol)
    c1 = np.zeros((n + 1, n + 1), dtype=np.complex128)
    c2 = np.zeros((n + 1, n + 1), dtype=np.complex128)
    c1[:n, :n], c2[:n, :n] = u.c1, u.c2
    s1, s2 = w.split()
    c1[n, n], c2[n, n] = s1, s2
    v = check_membership(QMatrix(c1, c2, copy=False), space, tol)
    vinv = group_inverse(v, tol)
    g2 = check_membership(vinv.matrix @ g.matrix @ v.matrix, space, tol)
    h2 = check_membership(vinv.matrix @ h.matrix @ v.matrix, space, tol)
    return g2, h2


def _beta_norm(m, n):
    blk = m.block(n, n + 1, 0, n)
    return float(np.sqrt((np.abs(blk.c1) ** 2 + np.abs(blk.c2) ** 2).sum()))


def _diag_delta(g, tol=DEFAULT):
    """delta read off a diagonal representative: positive angles vs the corner."""
    n = g.n
    m = g.matrix
    offdiag = max(abs(m.c1[i, j]) + abs(m.c2[i, j])
                  for i in range(n + 1) for j in range(n + 1) if i != j)
    if offdiag > 1e-8:
        raise ValueError("iteration requires a diagonal elliptic generator")
    angles = []
    for i in range(n + 1):
        lam = class_representative(m.entry(i, i))
        angles.append(math.atan2(lam.imag, lam.real))
    neg = angles[n]
    return max(delta_closed_form(a, neg) for a in angles[:n]), angles


def iterate(g, h, max_steps=200, tol=DEFAULT):
    """Run h_{k+1} = h_k g h_k^{-1} for diagonal g, recording the trace.

    Termination states are data: a vanishing bottom-left block at the start
    detects a shared fixed point; corner_modulus_sq - 1 passing below the
    convergence threshold means the sequence has numerically reached its
    block-diagonal limit.
    """
    space = g.space
    n = space.n
    delta, _ = _diag_delta(g, tol)
    steps = []
    distinct = 0
    hk = h
    prev_matrix = None
    c0 = hk.matrix.entry(n, n).modulus_sq()
    hypothesis = c0 * delta
    terminal = MAX_STEPS
    for k in range(max_steps + 1):
        ck = hk.matrix.entry(n, n).modulus_sq()
        bk = _beta_norm(hk.matrix, n)
        if prev_matrix is not None and (hk.matrix - prev_matrix).max_abs() > tol.distinct:
            distinct += 1
        if k == 0 and bk < tol.beta_vanish:
            steps.append(IterationStep(k, ck, bk, True))
            terminal = ELEMENTARY_DETECTED
            break
        if k >= 1 and ck - 1.0 < tol.convergence:
            steps.append(IterationStep(k, ck, bk, True))
            terminal = CONVERGED
            break
        if ck > max(1e6, 100.0 * c0):
            steps.append(IterationStep(k, ck, bk, True))
            terminal = DIVERGED
            break
        if k == max_steps:
            steps.append(IterationStep(k, ck, bk, True))
            terminal = MAX_STEPS
            break
        try:
            hinv = group_inverse(hk, tol)
            hnext = check_membership(hk.matrix @ g.matrix @ hinv.matrix, space, tol)
        except NotInGroup:
            steps.append(IterationStep(k, ck, bk, False))
            terminal = DIVERGED
            break
        cnext = hnext.matrix.entry(n, n).modulus_sq()
        ok = (cnext - 1.0) <= (ck - 1.0) * ck * delta + 1e-9
        steps.append(IterationStep(k, ck, bk, ok))
        prev_matrix = hk.matrix
        hk = hnext
    return IterationTrace(steps=steps, terminal=terminal,
                          distinct_count=distinct, hypothesis_product=hypothesis)


def criterion_value(g, h, tol=DEFAULT, starts=20, maxfev=500, seed=0):
    """Evaluate cosh^2(rho(q, h(q))/2) * delta(g) over the fixed set of g.

    Regular elliptic: the unique fixed point gives the exact value.
    Boundary elliptic: multi-start simplex descent over the fixed-set
    parameterization; the result is a numeric upper bound on the infimum,
    which is the sound direction for triggering the test.  The distance
    factor is cross-checked against the corner modulus after normalization.
    """
    profile = analyze_elliptic(g, tol)
    fx = fixed_points(profile, tol)
    space = g.space

    if fx.dimension == 0:
        witness = fx.interior_point([])
        cosh2 = bergman_cosh2(witness, apply_isometry(h, witness, tol), space, tol)
        attained = EXACT
    else:
        rng = np.random.default_rng(seed)
        dim = fx.parameter_dim

        def objective(params):
            try:
                pt = fx.point_from_params(params)
                return bergman_cosh2(pt, apply_isometry(h, pt, tol), space, tol)
            except (NotInterior, QJorgensenError):
                return np.inf

        best_val, best_params = np.inf, np.zeros(dim)
        for s in range(max(1, starts)):
            if s == 0:
                x0 = np.zeros(dim)
            else:
                x0 = rng.normal(size=dim)
                x0 *= 0.7 * rng.uniform() ** (1.0 / dim) / max(np.linalg.norm(x0), 1e-12)
            res = optimize.minimize(objective, x0, method="Nelder-Mead",
                                    options={"maxfev": maxfev, "xatol": 1e-10,
                                             "fatol": 1e-12})
            if res.fun < best_val:
                best_val, best_params = float(res.fun), res.x
        witness = fx.point_from_params(best_params)
        cosh2 = float(best_val)
        attained = UPPER_BOUND

    # after normalization the distance factor must equal the corner modulus^2
    _, h_norm = normalize_to_origin(g, h, witness, tol)
    corner_sq = h_norm.matrix.entry(space.n, space.n).modulus_sq()
    if abs(corner_sq - cosh2) > 1e-6 * max(1.0, cosh2):
        raise QJorgensenError(
            f"distance factor {cosh2:.12g} disagrees with normalized corner "
            f"{corner_sq:.12g}")

    return CriterionValue(cosh2=cosh2, delta=profile.delta,
                          product=cosh2 * profile.delta,
                          witness_point=witness, attained=attained)


def jorgensen_test(g, h, max_steps=200, tol=DEFAULT, starts=20, maxfev=500, seed=0):
    """Full screening: criterion, normalization, iteration, verdict.

    product >= 1 is inconclusive (the test is one-directional).  Below 1
    the generated group cannot be both discrete and non-elementary: a
    shared fixed point is reported as elementary, otherwise the contracting
    trace witnesses non-discreteness.
    """
    crit = criterion_value(g, h, tol, starts=starts, maxfev=maxfev, seed=seed)
    notes = []
    if crit.product >= 1.0:
        notes.append("criterion product >= 1: the test asserts nothing")
        return TestReport(verdict=INCONCLUSIVE, criterion=crit, trace=None, notes=notes)

    g1, h1 = normalize_to_origin(g, h, crit.witness_point, tol)
    g2, h2 = _diagonalize_at_origin(g1, h1, tol)
    corner_sq = h2.matrix.entry(g.space.n, g.space.n).modulus_sq()
    if abs(corner_sq - crit.cosh2) > 1e-6 * max(1.0, crit.cosh2):
        notes.append(f"normalized corner {corner_sq:.9g} vs criterion cosh2 "
                     f"{crit.cosh2:.9g}")
    trace = iterate(g2, h2, max_steps=max_steps, tol=tol)

    if trace.terminal == ELEMENTARY_DETECTED:
        moved = apply_isometry(h, crit.witness_point, tol)
        if not same_point(moved, crit.witness_point, 1e-8):
            raise QJorgensenError(
                "shared-fixed-point detection fired but h moves the witness")
        notes.append("h fixes the chosen fixed point of g")
        return TestReport(verdict=ELEMENTARY, criterion=crit, trace=trace, notes=notes)

    if trace.terminal == CONVERGED:
        notes.append(
            f"iterates converged with {trace.distinct_count} distinct elements")
    elif trace.terminal == MAX_STEPS:
        notes.append(
            "step budget exhausted before numerical convergence; the verified "
            "contraction with product < 1 still forces a distinct convergent "
            "sequence")
    else:
        notes.append("numerical anomaly: trace did not contract; inspect steps")
    return TestReport(verdict=NOT_DISCRETE, criterion=crit, trace=trace, notes=notes)
