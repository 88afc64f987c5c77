"""Reference eigenvalues of the interval time-frequency localization operator.

After rescaling both intervals to [-1/2, 1/2] the operator is the integral
operator with kernel sin(c pi (u - v)) / (pi (u - v)); its eigenvalues depend
only on the time-bandwidth product c. They are computed by a symmetrized
Nystrom discretization on a Gauss-Legendre grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import PRECISION_FLOOR, SymMatrix, gauss_legendre_rule, symmetric_eigen


@dataclass(frozen=True)
class EigenSpectrum:
    """Sorted eigenvalues of the localization operator for one value of c.

    eigenvalues is a descending array clipped to [0, 1]; index 0 holds the
    largest eigenvalue. lambda_(n) gives the 1-based lambda_n of the classical
    sequence 1 > lambda_1 > lambda_2 > ...  trace_defect records
    |sum of all raw eigenvalues - c| before any truncation or clipping.
    """

    c: float
    eigenvalues: np.ndarray
    node_count: int
    trace_defect: float
    raw_min: float
    raw_max: float

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        ev.flags.writeable = False
        object.__setattr__(self, "eigenvalues", ev)

    def lambda_(self, n: int) -> float:
        """1-based accessor: lambda_(1) is the largest eigenvalue."""
        if n < 1 or n > self.eigenvalues.size:
            raise IndexError(f"lambda index {n} outside 1..{self.eigenvalues.size}")
        return float(self.eigenvalues[n - 1])

    def one_minus_lambda_log10(self, i: int):
        """log10(1 - eigenvalues[i]), or None when 1 - lambda is at floor."""
        gap = 1.0 - float(self.eigenvalues[i])
        if gap < PRECISION_FLOOR:
            return None
        return math.log10(gap)


def sinc_kernel_value(c: float, u, v):
    """Kernel sin(c pi (u - v)) / (pi (u - v)); the diagonal limit is c."""
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    t = np.asarray(u, dtype=float) - np.asarray(v, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(t == 0.0, c, np.sin(c * math.pi * t) / (math.pi * t))
    if out.ndim == 0:
        return float(out)
    return out


def min_nodes(c: float) -> int:
    """Aliasing floor: at least ~10 nodes per kernel oscillation, doubled."""
    return max(50, math.ceil(20 * c))


def default_nodes(c: float) -> int:
    return max(400, math.ceil(20 * c))


def prolate_spectrum(c: float, n_nodes: int | None = None, n_eigs: int | None = None) -> EigenSpectrum:
    """Nystrom spectrum of the localization operator at time-bandwidth c.

    Builds a Gauss-Legendre rule on [-1/2, 1/2], assembles the symmetrized
    matrix sqrt(w_i) K(u_i, u_j) sqrt(w_j), and solves it with the Jacobi
    eigensolver. Returns the top n_eigs eigenvalues (all of them by default)
    clipped to [0, 1]; tiny negative round-off of the positive operator is
    clipped to 0.
    """
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    if n_nodes is None:
        n_nodes = default_nodes(c)
    floor_nodes = min_nodes(c)
    if n_nodes < floor_nodes:
        raise ValueError(
            f"n_nodes={n_nodes} below the floor {floor_nodes} for c={c}: "
            f"the sinc kernel would be under-resolved (aliasing risk)"
        )
    rule = gauss_legendre_rule(n_nodes, -0.5, 0.5)
    u = rule.nodes
    du = u[:, None] - u[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        kernel = np.sin(c * math.pi * du) / (math.pi * du)
    np.fill_diagonal(kernel, c)
    sw = np.sqrt(rule.weights)
    mat = sw[:, None] * kernel * sw[None, :]
    w, _ = symmetric_eigen(SymMatrix.from_full(mat), want_vectors=False)
    defect = abs(float(w.sum()) - c)
    raw_min = float(w.min())
    raw_max = float(w.max())
    if n_eigs is not None:
        if n_eigs < 1:
            raise ValueError("n_eigs must be >= 1")
        w = w[:n_eigs]
    return EigenSpectrum(
        c=c,
        eigenvalues=np.clip(w, 0.0, 1.0),
        node_count=n_nodes,
        trace_defect=defect,
        raw_min=raw_min,
        raw_max=raw_max,
    )


def plunge_count(spec: EigenSpectrum, eps: float) -> int:
    """Number of eigenvalues strictly inside (eps, 1 - eps)."""
    if not 0 < eps < 0.5:
        raise ValueError(f"need 0 < eps < 1/2, got {eps}")
    ev = spec.eigenvalues
    return int(np.sum((ev > eps) & (ev < 1.0 - eps)))


def trace_defect(spec: EigenSpectrum) -> float:
    """|sum of all eigenvalues - c|; the discrete trace identity residual."""
    return spec.trace_defect
