"""Shared numeric tolerances.

A single record is threaded through every module so that CLI overrides
reach all consumers consistently.  Values are absolute unless a docstring
says otherwise.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    equality: float = 1e-9        # generic scalar / entry comparisons
    unit_modulus: float = 1e-9    # |q| == 1 checks, eigenvalue moduli
    membership: float = 1e-8      # Sp(n,1) identity residuals (inputs may be hand-rounded)
    pair_match: float = 1e-7      # conjugate-pair clustering of adjoint eigenvalues
    angle_cluster: float = 1e-6   # radians; when two eigenvalue angles share a class
    type_assign: float = 1e-9     # certainty margin for the negative-type eigenvector
    null_norm: float = 1e-9       # |<z,z>| below this on a unit lift -> null
    beta_vanish: float = 1e-10    # Euclidean norm; shared-fixed-point detection
    convergence: float = 1e-12    # threshold on corner modulus^2 - 1
    distinct: float = 1e-8        # max entry-norm gap between consecutive iterates

    def with_overrides(self, **kw):
        return replace(self, **kw)


DEFAULT = Tolerances()
