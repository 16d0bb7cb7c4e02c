"""Conditional independence as a checkable predicate on explicit triples.

X is conditionally independent of Y given Z when, for every value triple
with P(Y=y, Z=z) > 0, the conditional P(X=x | Y=y, Z=z) equals the
Z-only conditional P(X=x | Z=z). The check runs over the full enumerated
joint; conditioning events with zero probability are vacuously satisfied
because their conditionals are undefined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .schema import RENORM_WINDOW, SUM_TOLERANCE

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class TripleJoint:
    """Explicit mass over (X, Y, Z) value triples; axes are X, Y, Z in order."""

    names: tuple[str, str, str]
    mass: np.ndarray

    def __post_init__(self) -> None:
        if len(set(self.names)) != 3:
            raise ValidationError("the three variable names must be distinct")
        arr = np.array(self.mass, dtype=np.float64)
        if arr.ndim != 3:
            raise ValidationError(f"mass must be 3-dimensional, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValidationError("mass entries must be finite")
        if (arr < 0).any():
            raise ValidationError("mass entries must be non-negative")
        total = float(arr.sum())
        if abs(total - 1.0) <= SUM_TOLERANCE:
            pass
        elif abs(total - 1.0) <= RENORM_WINDOW:
            arr = arr / total
        else:
            raise ValidationError(
                f"joint mass sums to {total!r}, outside the "
                f"{RENORM_WINDOW} renormalization window"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "mass", arr)


@dataclass(frozen=True)
class IndependenceWitness:
    """One violating triple with both conditionals, for independent rechecking."""

    x_index: int
    y_index: int
    z_index: int
    conditional: float          # P(X=x | Y=y, Z=z)
    conditional_given_z: float  # P(X=x | Z=z)


def with_roles(joint: TripleJoint, x: str, y: str, z: str) -> TripleJoint:
    """Reorder the axes so the named variables play the X, Y, Z roles."""
    wanted = (x, y, z)
    for name in wanted:
        if name not in joint.names:
            raise ValidationError(f"unknown variable {name!r}; have {joint.names}")
    if len(set(wanted)) != 3:
        raise ValidationError("x, y, z must name three distinct variables")
    perm = tuple(joint.names.index(name) for name in wanted)
    return TripleJoint(wanted, np.transpose(joint.mass, perm))


def is_conditionally_independent(
    joint: TripleJoint, tol: float = DEFAULT_TOLERANCE
) -> tuple[bool, IndependenceWitness | None]:
    """Check P(X=x | Y=y, Z=z) = P(X=x | Z=z) for all triples, within tol.

    Returns (True, None) when the defining equality holds everywhere it is
    defined, else (False, witness) for the first violating triple in index
    order.
    """
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    mass = joint.mass
    p_yz = mass.sum(axis=0)          # [y, z]
    p_xz = mass.sum(axis=1)          # [x, z]
    p_z = p_yz.sum(axis=0)           # [z]
    nx, ny, nz = mass.shape
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                if p_yz[j, k] <= 0:
                    continue
                cond = mass[i, j, k] / p_yz[j, k]
                cond_z = p_xz[i, k] / p_z[k]
                if abs(cond - cond_z) > tol:
                    return False, IndependenceWitness(i, j, k, cond, cond_z)
    return True, None


def weather_example() -> TripleJoint:
    """A boolean (thunder, rain, lightning) joint built so that thunder and
    rain are independent given lightning yet marginally dependent.

    Construction: P(L=1)=0.1, P(T=1|L=1)=0.9, P(T=1|L=0)=0.05,
    P(R=1|L=1)=0.7, P(R=1|L=0)=0.2, combined as P(L) * P(T|L) * P(R|L).
    """
    p_l = (0.9, 0.1)
    p_t_given_l = {0: (0.95, 0.05), 1: (0.1, 0.9)}   # l -> (P(T=0|l), P(T=1|l))
    p_r_given_l = {0: (0.8, 0.2), 1: (0.3, 0.7)}
    mass = np.zeros((2, 2, 2))
    for t in range(2):
        for r in range(2):
            for l in range(2):
                mass[t, r, l] = p_l[l] * p_t_given_l[l][t] * p_r_given_l[l][r]
    return TripleJoint(("thunder", "rain", "lightning"), mass)
