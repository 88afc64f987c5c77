"""Time-frequency shifted Hermite systems and their Bargmann-side algebra.

Each packing disk m with center w_m and radius r_m contributes, at
time-bandwidth c, the shifted Hermite functions of degree k <= c pi r_m^2
centered at v = sqrt(c) w_m in the time-frequency plane. A member is realized
as modulation after translation,

    f(x) = exp(2 pi i xi0 x) h_k(x - x0),      (x0, xi0) = (Re v, Im v),

which matches the Fock-space shift of the normalized monomial basis up to one
unimodular phase per member; every quantity consumed downstream (Gram
magnitudes, Rayleigh quotients, residual norms) is invariant under that
phase. Gram entries have a closed form through associated Laguerre
polynomials; it is never used before being cross-validated against the
direct quadrature oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import QuadratureRule, gauss_legendre_rule, hermite_block
from .packing import Packing


class ConventionError(RuntimeError):
    """Closed-form Gram disagrees with the quadrature oracle."""


@dataclass(frozen=True)
class SystemMember:
    """One shifted Hermite function: disk index, degree, center sqrt(c) w_m."""

    disk_index: int
    degree: int
    center: complex
    c: float

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        if self.c <= 0:
            raise ValueError("c must be > 0")
        object.__setattr__(self, "center", complex(self.center))

    @property
    def x0(self) -> float:
        return self.center.real

    @property
    def xi0(self) -> float:
        return self.center.imag


@dataclass
class SystemSpec:
    """The full member family for one (packing, c) pair; Gram is lazy."""

    packing: Packing
    c: float
    members: tuple
    _gram: np.ndarray | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.members)


def build_system(p: Packing, c: float) -> SystemSpec:
    """Members (m, k) for every disk m with k = 0 .. floor(c pi r_m^2).

    Ordered lexicographically by (disk index, degree). When the packing
    covers area 1 - eps the family has more than (1 - eps) c members.
    """
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    sc = math.sqrt(c)
    members = []
    for m in range(p.count):
        k_top = math.floor(c * math.pi * float(p.rs[m]) ** 2)
        v = complex(sc * float(p.xs[m]), sc * float(p.ys[m]))
        for k in range(k_top + 1):
            members.append(SystemMember(m, k, v, c))
    return SystemSpec(packing=p, c=c, members=tuple(members))


# ---------------------------------------------------------------------------
# pointwise evaluation
# ---------------------------------------------------------------------------

def eval_member(s: SystemMember, x) -> np.ndarray:
    """Member values exp(2 pi i xi0 x) h_k(x - x0) at x (scalar or array)."""
    x = np.asarray(x, dtype=float)
    h = hermite_block(s.degree, x - s.x0)[s.degree]
    return np.exp(2j * math.pi * s.xi0 * x) * h


def eval_member_fourier(s: SystemMember, xi) -> np.ndarray:
    """Fourier transform of the member, in closed form.

    With the forward transform integral of f(x) exp(-2 pi i x xi) and
    hat(h_k) = (-i)^k h_k, the transform is again a shifted Hermite function
    with center moved to (xi0, -x0):

        hat(f)(xi) = (-i)^k exp(2 pi i x0 xi0) exp(-2 pi i x0 xi) h_k(xi - xi0)

    so |hat(f)| is the |f| profile rotated by 90 degrees in the
    time-frequency plane.
    """
    xi = np.asarray(xi, dtype=float)
    h = hermite_block(s.degree, xi - s.xi0)[s.degree]
    phase = (-1j) ** s.degree * np.exp(2j * math.pi * s.x0 * s.xi0)
    return phase * np.exp(-2j * math.pi * s.x0 * xi) * h


# ---------------------------------------------------------------------------
# Gram matrix: closed form plus quadrature oracle
# ---------------------------------------------------------------------------

def _genlaguerre(k: int, alpha: int, t: np.ndarray) -> np.ndarray:
    """Associated Laguerre L_k^(alpha)(t) by the three-term recurrence."""
    l0 = np.ones_like(t)
    if k == 0:
        return l0
    l1 = 1.0 + alpha - t
    for i in range(1, k):
        l0, l1 = l1, ((2 * i + 1 + alpha - t) * l1 - (i + alpha) * l0) / (i + 1)
    return l1


def gram_block(members) -> np.ndarray:
    """Closed-form Hermitian Gram matrix of a member list.

    For degrees k <= l at centers v, v' with delta = v - v' the entry is

        exp(i pi (a b - a' b' + a' b - a b')) sqrt(k!/l!)
        (sqrt(pi) delta)^(l-k) exp(-pi |delta|^2 / 2) L_k^(l-k)(pi |delta|^2)

    with (a, b) = (Re v, Im v). Same-disk entries collapse to delta_{kl}
    exactly and the diagonal is exactly 1.
    """
    n = len(members)
    v = np.array([m.center for m in members], dtype=complex)
    deg = np.array([m.degree for m in members], dtype=int)
    a = v.real
    b = v.imag
    delta = v[:, None] - v[None, :]
    t = math.pi * np.abs(delta) ** 2
    phase = np.exp(
        1j * math.pi * (
            (a * b)[:, None] - (a * b)[None, :]
            + a[None, :] * b[:, None] - a[:, None] * b[None, :]
        )
    )
    gram = np.zeros((n, n), dtype=complex)
    for ka in np.unique(deg):
        rows = np.nonzero(deg == ka)[0]
        for kb in np.unique(deg):
            if kb < ka:
                continue
            cols = np.nonzero(deg == kb)[0]
            tb = t[np.ix_(rows, cols)]
            db = delta[np.ix_(rows, cols)]
            amp = math.exp(0.5 * (math.lgamma(ka + 1) - math.lgamma(kb + 1)))
            block = (
                phase[np.ix_(rows, cols)]
                * amp
                * (math.sqrt(math.pi) * db) ** (kb - ka)
                * np.exp(-0.5 * tb)
                * _genlaguerre(int(ka), int(kb - ka), tb)
            )
            gram[np.ix_(rows, cols)] = block
            if kb > ka:
                gram[np.ix_(cols, rows)] = block.conj().T
    # force exact Hermitian symmetry and an exactly unit diagonal
    iu = np.triu_indices(n, k=1)
    gram[iu[1], iu[0]] = gram[iu].conj()
    np.fill_diagonal(gram, 1.0)
    return gram


def default_oracle_rule(c: float, n_nodes: int | None = None) -> QuadratureRule:
    """Quadrature rule on [-L, L] with L = sqrt(c)/2 + 10.

    Members' Gaussian envelopes are below 1e-60 outside, so truncating the
    real line there is harmless.
    """
    half = math.sqrt(c) / 2.0 + 10.0
    if n_nodes is None:
        n_nodes = max(800, math.ceil(60 * half))
    return gauss_legendre_rule(n_nodes, -half, half)


def gram_entry_oracle(si: SystemMember, sj: SystemMember, rule: QuadratureRule) -> complex:
    """Inner product <f_i, f_j> by direct quadrature (test/validation path)."""
    if si.c != sj.c:
        raise ValueError("members belong to different time-bandwidth products")
    fi = eval_member(si, rule.nodes)
    fj = eval_member(sj, rule.nodes)
    return complex(np.sum(rule.weights * fi * np.conj(fj)))


def _cross_validate_gram(members, gram: np.ndarray, tol: float = 1e-8, samples: int = 8):
    """Compare sampled closed-form entries against the quadrature oracle."""
    n = len(members)
    if n < 2:
        return
    rng = np.random.default_rng(20_26)
    rule = default_oracle_rule(members[0].c)
    pairs = set()
    while len(pairs) < min(samples, n * (n - 1) // 2):
        i, j = rng.integers(0, n, size=2)
        if i != j:
            pairs.add((min(i, j), max(i, j)))
    worst = 0.0
    for i, j in sorted(pairs):
        oracle = gram_entry_oracle(members[i], members[j], rule)
        worst = max(worst, abs(gram[i, j] - oracle))
    if worst > tol:
        raise ConventionError(
            f"closed-form Gram deviates from the quadrature oracle by {worst:.3e} "
            f"(tolerance {tol:.0e}): convention mismatch"
        )


def gram_matrix(sys: SystemSpec) -> np.ndarray:
    """Gram matrix of the whole system (cached on the SystemSpec).

    The closed form is cross-validated against the quadrature oracle on a
    sample of entries before first use; a mismatch beyond 1e-8 is a hard
    error rather than a silent convention bug.
    """
    if sys.size > 2000:
        raise ValueError(f"system too large for a dense Gram matrix ({sys.size} members)")
    if sys._gram is None:
        gram = gram_block(sys.members)
        _cross_validate_gram(sys.members, gram)
        sys._gram = gram
    return sys._gram


def gram_csv_lines(gram: np.ndarray):
    """CSV rows (row, col, log10_abs) of the Gram magnitudes; 'floor' marks
    entries whose magnitude is not representable in linear scale."""
    yield "row,col,log10_abs"
    n = gram.shape[0]
    for i in range(n):
        for j in range(n):
            mag = abs(gram[i, j])
            if mag == 0.0:
                val = "floor"
            else:
                val = f"{math.log10(mag):.12e}"
            yield f"{i},{j},{val}"


# ---------------------------------------------------------------------------
# Bargmann transform (numeric validation of the conventions)
# ---------------------------------------------------------------------------

def bargmann_numeric(f, z: complex, rule: QuadratureRule) -> complex:
    """Quadrature of the Bargmann integral

        2^{1/4} integral f(t) exp(2 pi t z - pi t^2 - (pi/2) z^2) dt

    for f a SystemMember, a callable, or sampled values on the rule's nodes.
    Accurate for |z| <= 10 with the default oracle rule.
    """
    t = rule.nodes
    if isinstance(f, SystemMember):
        ft = eval_member(f, t)
    elif callable(f):
        ft = np.asarray(f(t))
    else:
        ft = np.asarray(f)
        if ft.shape != t.shape:
            raise ValueError("sampled values must match the rule's nodes")
    kernel = np.exp(2.0 * math.pi * t * z - math.pi * t * t - 0.5 * math.pi * z * z)
    return complex(2.0 ** 0.25 * np.sum(rule.weights * ft * kernel))


def bargmann_hermite_check(k_max: int = 10, points=(0.5, 1.0, 1j, 1 + 1j), rule: QuadratureRule | None = None) -> float:
    """Max relative error of B h_k(z) against sqrt(pi^k / k!) z^k."""
    if rule is None:
        rule = gauss_legendre_rule(800, -14.0, 14.0)
    h = hermite_block(k_max, rule.nodes)
    worst = 0.0
    for k in range(k_max + 1):
        for z in points:
            got = bargmann_numeric(h[k], complex(z), rule)
            want = math.sqrt(math.pi**k / math.factorial(k)) * complex(z) ** k
            scale = max(abs(want), 1e-30)
            worst = max(worst, abs(got - want) / scale)
    return worst


def fourier_rotation_check(degree: int = 3, points=(1.0, 1 + 1j), rule: QuadratureRule | None = None):
    """Measure both orientations of the Fourier-as-rotation identity.

    Returns (err_minus, err_plus): the relative errors of
    B(hat f)(z) = B f(-i z) and B(hat f)(z) = B f(+i z) for f = h_degree.
    With the forward transform integral exp(-2 pi i x xi) the true identity
    is the -i orientation; the +i orientation holds for the inverse
    transform. Only one of the two can hold for odd degrees.
    """
    if rule is None:
        rule = gauss_legendre_rule(800, -14.0, 14.0)
    h = hermite_block(degree, rule.nodes)[degree]
    fhat = (-1j) ** degree * h  # closed-form forward transform of h_degree
    err_minus = 0.0
    err_plus = 0.0
    for z in points:
        z = complex(z)
        left = bargmann_numeric(fhat, z, rule)
        scale = max(abs(left), 1e-30)
        err_minus = max(err_minus, abs(left - bargmann_numeric(h, -1j * z, rule)) / scale)
        err_plus = max(err_plus, abs(left - bargmann_numeric(h, 1j * z, rule)) / scale)
    return err_minus, err_plus
