"""Self-contained numerical kernels.

Gauss-Legendre quadrature (Newton on the Legendre recurrence), a dense
symmetric eigensolver (cyclic Jacobi, JIT-compiled), the minimum eigenvalue
of a symmetric definite pencil via Cholesky reduction, stable evaluation of
Hermite functions, and a log-scale scalar for exponentially small values.

Everything here is a pure function of immutable inputs and safe to call
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

# Linear-scale output of exponentially small quantities clamps here; below it
# values are only meaningful in log scale.
LINEAR_FLOOR = 1e-300

# Values of lambda or 1 - lambda below this are "at floor": double precision
# cannot resolve them and ratio tests must exclude them.
PRECISION_FLOOR = 1e-12


class NumericsError(RuntimeError):
    """Internal numerical failure (non-convergence, invalid state)."""


class GramSingularError(NumericsError):
    """Cholesky pivot collapsed: the Gram matrix is numerically singular."""

    def __init__(self, pivot: float, index: int):
        self.pivot = pivot
        self.index = index
        super().__init__(
            f"Gram numerically singular: Cholesky pivot {pivot:.3e} at index "
            f"{index} (the system is not numerically independent at double "
            f"precision)"
        )


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights integrating over [a, b].

    Nodes are strictly increasing and interior; weights are positive and sum
    to b - a (relative 1e-12).
    """

    nodes: np.ndarray
    weights: np.ndarray
    a: float
    b: float

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be matching 1-d arrays")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("nodes must be strictly increasing")
        if nodes[0] <= self.a or nodes[-1] >= self.b:
            raise ValueError("nodes must lie strictly inside (a, b)")
        if not np.all(weights > 0):
            raise ValueError("weights must be positive")
        total = weights.sum()
        if abs(total - (self.b - self.a)) > 1e-12 * abs(self.b - self.a):
            raise ValueError("weights do not sum to the interval length")

    @property
    def n(self) -> int:
        return self.nodes.size

    def integrate(self, values: np.ndarray):
        """Apply the rule to sampled values (last axis runs over nodes)."""
        return np.asarray(values) @ self.weights


def gauss_legendre_rule(n: int, a: float, b: float) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [a, b].

    Exact for polynomials of degree <= 2n - 1. Nodes are found by Newton
    iteration on the Legendre three-term recurrence, converged to 1e-15
    per node.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    k = np.arange(1, n + 1)
    x = np.cos(math.pi * (k - 0.25) / (n + 0.5))
    dp = np.ones_like(x)
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        if n == 1:
            pn, pn1 = p1, p0
        else:
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            pn, pn1 = p1, p0
        dp = n * (x * pn - pn1) / (x * x - 1.0)
        dx = pn / dp
        x -= dx
        if np.max(np.abs(dx)) <= 1e-15:
            break
    else:
        raise NumericsError(f"Gauss-Legendre Newton did not converge for n={n}")
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # cos ordering is descending; flip to ascending
    x = x[::-1].copy()
    w = w[::-1].copy()
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return QuadratureRule(mid + half * x, half * w, a, b)


# ---------------------------------------------------------------------------
# symmetric eigensolver (cyclic Jacobi)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymMatrix:
    """Dense real symmetric matrix with exact (bitwise) symmetry.

    Built from the upper triangle, so entries(i, j) == entries(j, i) exactly.
    """

    a: np.ndarray

    def __post_init__(self):
        arr = np.array(self.a, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("SymMatrix needs a square 2-d array")
        if arr.shape[0] < 1:
            raise ValueError("dimension must be >= 1")
        iu = np.triu_indices(arr.shape[0], k=1)
        arr[iu[1], iu[0]] = arr[iu]
        arr.flags.writeable = False
        object.__setattr__(self, "a", arr)

    @classmethod
    def from_full(cls, arr: np.ndarray, atol: float = 0.0) -> "SymMatrix":
        """Wrap a full array, mirroring the upper triangle into the lower.

        With atol > 0 the input is first checked to be symmetric to that
        absolute tolerance.
        """
        arr = np.asarray(arr, dtype=float)
        if atol > 0 and arr.size and np.max(np.abs(arr - arr.T)) > atol:
            raise ValueError("matrix is not symmetric within tolerance")
        return cls(arr)

    @property
    def dim(self) -> int:
        return self.a.shape[0]


@njit(cache=True, nogil=True)
def _jacobi_kernel(a, v, want_v):  # pragma: no cover - exercised via wrapper
    d = a.shape[0]
    fro = 0.0
    for i in range(d):
        for j in range(d):
            fro += a[i, j] * a[i, j]
    fro = math.sqrt(fro)
    if fro == 0.0:
        return 0
    tol = 1e-12 * fro
    skip = 0.01 * tol
    for sweep in range(60):
        off = 0.0
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = abs(a[p, q])
                if apq > off:
                    off = apq
        if off <= tol:
            return sweep
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    s0 = 1.0 if theta >= 0.0 else -1.0
                    t = s0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                cth = 1.0 / math.sqrt(t * t + 1.0)
                sth = t * cth
                tau = sth / (1.0 + cth)
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(d):
                    if i != p and i != q:
                        aip = a[i, p]
                        aiq = a[i, q]
                        a[i, p] = aip - sth * (aiq + tau * aip)
                        a[p, i] = a[i, p]
                        a[i, q] = aiq + sth * (aip - tau * aiq)
                        a[q, i] = a[i, q]
                if want_v:
                    for i in range(d):
                        vip = v[i, p]
                        viq = v[i, q]
                        v[i, p] = vip - sth * (viq + tau * vip)
                        v[i, q] = viq + sth * (vip - tau * viq)
    return -1


def symmetric_eigen(m: SymMatrix, want_vectors: bool = False):
    """All eigenvalues of a symmetric matrix, sorted descending.

    Cyclic Jacobi sweeps run until the largest off-diagonal entry falls below
    1e-12 times the Frobenius norm (O(d^3) per sweep). With want_vectors the
    orthonormal eigenvectors are returned as columns, matched to eigenvalues.
    """
    if not isinstance(m, SymMatrix):
        m = SymMatrix.from_full(np.asarray(m, dtype=float))
    a = m.a.copy()
    d = a.shape[0]
    v = np.eye(d) if want_vectors else np.empty((1, 1))
    sweeps = _jacobi_kernel(a, v, want_vectors)
    if sweeps < 0:
        raise NumericsError("Jacobi eigensolver did not converge in 60 sweeps")
    w = np.diag(a).copy()
    order = np.argsort(w)[::-1]
    w = w[order]
    if want_vectors:
        return w, v[:, order]
    return w, None


def _cholesky_lower(b: np.ndarray) -> np.ndarray:
    """Cholesky factor of a symmetric positive definite matrix.

    Raises GramSingularError when a pivot drops to 1e-14 of the largest
    diagonal entry, signalling numerical dependence.
    """
    d = b.shape[0]
    max_diag = float(np.max(np.diag(b)))
    if max_diag <= 0:
        raise GramSingularError(max_diag, 0)
    low = np.zeros_like(b)
    for k in range(d):
        pivot = b[k, k] - low[k, :k] @ low[k, :k]
        if pivot <= 1e-14 * max_diag:
            raise GramSingularError(float(pivot), k)
        low[k, k] = math.sqrt(pivot)
        if k + 1 < d:
            low[k + 1 :, k] = (b[k + 1 :, k] - low[k + 1 :, :k] @ low[k, :k]) / low[k, k]
    return low


def pencil_eigen_min(a: SymMatrix, b: SymMatrix) -> float:
    """Smallest generalized eigenvalue of (A, B) with B positive definite.

    Reduces via B = L L^T to the ordinary problem for L^-1 A L^-T; the result
    is the minimum over nonzero coefficient vectors of (x^T A x) / (x^T B x),
    i.e. the min-max Rayleigh value over the span.
    """
    if not isinstance(a, SymMatrix):
        a = SymMatrix.from_full(np.asarray(a, dtype=float))
    if not isinstance(b, SymMatrix):
        b = SymMatrix.from_full(np.asarray(b, dtype=float))
    if a.dim != b.dim:
        raise ValueError("A and B must have the same dimension")
    low = _cholesky_lower(b.a)
    y = np.linalg.solve(low, a.a)
    cmat = np.linalg.solve(low, y.T).T
    w, _ = symmetric_eigen(SymMatrix.from_full(cmat), want_vectors=False)
    return float(w[-1])


def hermitian_embed(h: np.ndarray) -> SymMatrix:
    """Real symmetric embedding [[X, -Y], [Y, X]] of a Hermitian matrix.

    The embedding has the same spectrum with doubled multiplicity, so pencil
    and eigen routines for real symmetric matrices apply to Hermitian ones.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("need a square matrix")
    if h.size and np.max(np.abs(h - h.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(h))):
        raise ValueError("matrix is not Hermitian")
    x = h.real.copy()
    y = h.imag.copy()
    # force exact symmetry / antisymmetry before assembling the block matrix
    iu = np.triu_indices(h.shape[0], k=1)
    x[iu[1], iu[0]] = x[iu]
    y[iu[1], iu[0]] = -y[iu]
    np.fill_diagonal(y, 0.0)
    top = np.hstack([x, -y])
    bot = np.hstack([y, x])
    return SymMatrix(np.vstack([top, bot]))


# ---------------------------------------------------------------------------
# Hermite functions
# ---------------------------------------------------------------------------

def hermite_block(k_max: int, x) -> np.ndarray:
    """Hermite functions h_0 .. h_{k_max} at x (scalar or array).

    Convention pinned to the 2*pi Fourier normalization:

        h_0(x) = 2^{1/4} exp(-pi x^2)
        sqrt(k+1) h_{k+1}(x) = 2 sqrt(pi) x h_k(x) - sqrt(k) h_{k-1}(x)

    so that the Bargmann transform of h_k is sqrt(pi^k / k!) z^k (validated
    numerically by fock.bargmann_numeric). Where the leading Gaussian
    underflows, the whole column is returned as 0.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    x = np.asarray(x, dtype=float)
    out = np.zeros((k_max + 1,) + x.shape)
    out[0] = 2.0 ** 0.25 * np.exp(-math.pi * x * x)
    if k_max >= 1:
        out[1] = 2.0 * math.sqrt(math.pi) * x * out[0]
    for k in range(1, k_max):
        out[k + 1] = (2.0 * math.sqrt(math.pi) * x * out[k] - math.sqrt(k) * out[k - 1]) / math.sqrt(k + 1)
    return out


# ---------------------------------------------------------------------------
# log-scale scalar
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=False)
class LogMagnitude:
    """Scalar stored as log|value| plus a unit phase (sign for reals).

    Multiplication adds log_abs exactly; magnitude comparisons use log_abs
    only, so quantities like alpha^c stay meaningful far below 1e-300.
    """

    log_abs: float
    phase: complex = field(default=1.0 + 0.0j)

    def __post_init__(self):
        ph = complex(self.phase)
        mag = abs(ph)
        if math.isfinite(mag) and mag > 0 and abs(mag - 1.0) > 1e-12:
            raise ValueError("phase must be unimodular")
        object.__setattr__(self, "phase", ph)

    @classmethod
    def from_float(cls, value: float) -> "LogMagnitude":
        if value == 0:
            return cls(-math.inf, 1.0 + 0.0j)
        return cls(math.log(abs(value)), complex(1.0 if value > 0 else -1.0))

    def to_float(self) -> float:
        """Linear-scale value, clamped at LINEAR_FLOOR in magnitude."""
        if self.log_abs == -math.inf:
            return 0.0
        mag = math.exp(self.log_abs) if self.log_abs < 700 else math.inf
        if 0.0 < mag < LINEAR_FLOOR:
            mag = LINEAR_FLOOR
        return mag * self.phase.real if self.phase.imag == 0 else mag * abs(self.phase)

    @property
    def at_floor(self) -> bool:
        return self.log_abs < math.log(LINEAR_FLOOR)

    def log10(self) -> float:
        return self.log_abs / math.log(10.0)

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        if not isinstance(other, LogMagnitude):
            other = LogMagnitude.from_float(float(other))
        return LogMagnitude(self.log_abs + other.log_abs, self.phase * other.phase)

    __rmul__ = __mul__

    def pow(self, exponent: float) -> "LogMagnitude":
        """Magnitude power |self|^exponent (phase of real positives kept)."""
        return LogMagnitude(self.log_abs * exponent, 1.0 + 0.0j)

    # magnitude ordering
    def __lt__(self, other):
        return self.log_abs < _log_abs_of(other)

    def __le__(self, other):
        return self.log_abs <= _log_abs_of(other)

    def __gt__(self, other):
        return self.log_abs > _log_abs_of(other)

    def __ge__(self, other):
        return self.log_abs >= _log_abs_of(other)


def _log_abs_of(x) -> float:
    if isinstance(x, LogMagnitude):
        return x.log_abs
    x = float(x)
    return -math.inf if x == 0 else math.log(abs(x))


def log_add(a: LogMagnitude, b: LogMagnitude) -> LogMagnitude:
    """Log-domain sum of two nonnegative magnitudes."""
    la, lb = a.log_abs, b.log_abs
    if la == -math.inf:
        return LogMagnitude(lb)
    if lb == -math.inf:
        return LogMagnitude(la)
    hi, lo = (la, lb) if la >= lb else (lb, la)
    return LogMagnitude(hi + math.log1p(math.exp(lo - hi)))
