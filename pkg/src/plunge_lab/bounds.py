"""Explicit constants and bound formulas, all evaluable at any (packing, c).

The certificate constants are built from the almost-orthogonality estimate:
for each disk of radius r_n in a packing with separation margin gamma,

    u_n    = (1 + gamma / (2 r_n))^2 - 1
    beta_n = exp((pi/2) (1 / (1 + gamma/(2 r_n))^2 - 1))     (series ratio)
    nu_n   = (1 + u_n) exp(-u_n)
    C_n    = 1 / (1 - beta_n)                                 (series sum)

with nu0 and c_eps the maxima over disks, r the minimum radius, and the
Gaussian-tail constant C_gauss = 1 / (1 - exp(-2 pi)). The cross-term bound
is 2 c_eps pi nu0^(c pi r^2 / 2); any alpha with nu0^(pi r^2 / 2) < alpha < 1
certifies lambda_n(c) >= 1 - 3 sqrt(2c) alpha^c once alpha^c < 1/(2c).

Reference results evaluated alongside: the plunge drift limit
(1 + e^b)^-1 at index [c + b ln(c)/pi^2], the explicit plunge-width bound
(2/pi^2) ln(50c+25) ln(5/(eps(1-eps))) + 7, the fixed-n gap asymptotic, the
fixed-c decay asymptotic and the pre-plunge lower bound
1 - (pi c)^n / n! exp(-pi c / 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import LogMagnitude, log_add
from .packing import Packing


@dataclass(frozen=True)
class CertificateConstants:
    """Every explicit constant of the almost-orthogonality certificate."""

    gamma: float
    r_min: float
    u: np.ndarray
    beta: np.ndarray
    nu: np.ndarray
    c_geo: np.ndarray
    nu0: float
    c_eps: float
    c_gauss: float
    alpha_floor: float  # nu0^(pi r_min^2 / 2), the smallest admissible alpha
    alpha: float

    def __post_init__(self):
        for name in ("u", "beta", "nu", "c_geo"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def certificate_constants(p: Packing, alpha: float | None = None) -> CertificateConstants:
    """Constants for a packing; alpha defaults to the midpoint of
    (nu0^(pi r^2/2), 1) and may be overridden with any admissible value."""
    gamma = p.gamma
    if gamma <= 0:
        raise ValueError("degenerate packing: separation margin gamma must be > 0")
    rs = p.rs
    ratio = 1.0 + gamma / (2.0 * rs)
    u = ratio**2 - 1.0
    beta = np.exp(0.5 * math.pi * (1.0 / ratio**2 - 1.0))
    nu = (1.0 + u) * np.exp(-u)
    c_geo = 1.0 / (1.0 - beta)
    nu0 = float(nu.max())
    c_eps = float(c_geo.max())
    r_min = float(rs.min())
    alpha_floor = math.exp(0.5 * math.pi * r_min**2 * math.log(nu0))
    if alpha is None:
        alpha = 0.5 * (alpha_floor + 1.0)
    elif not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha={alpha} must lie in (0, 1)")
    # overrides at or below alpha_floor make the bound exploratory rather
    # than certified; alpha_floor is recorded so reports can flag that
    return CertificateConstants(
        gamma=gamma,
        r_min=r_min,
        u=u,
        beta=beta,
        nu=nu,
        c_geo=c_geo,
        nu0=nu0,
        c_eps=c_eps,
        c_gauss=1.0 / (1.0 - math.exp(-2.0 * math.pi)),
        alpha_floor=alpha_floor,
        alpha=float(alpha),
    )


def proposition_pair_bound(k: CertificateConstants, c: float) -> LogMagnitude:
    """Cross-disk inner-product bound 2 c_eps pi nu0^(c pi r^2 / 2), in log scale.

    Strictly decreasing in c since nu0 < 1.
    """
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    log_val = math.log(2.0 * k.c_eps * math.pi) + 0.5 * c * math.pi * k.r_min**2 * math.log(k.nu0)
    return LogMagnitude(log_val)


def proposition_tail_bound(k: CertificateConstants, c: float) -> LogMagnitude:
    """Bound on the out-of-interval norm of any member, in log scale.

    Sum of the cross-term-style contribution c_eps pi nu0^(c pi r^2/2) (the
    far region, where the unit Fock bound applies) and the Gaussian-tail
    contribution c sqrt(C_gauss sqrt(2)) exp(-pi gamma^2 c / 4) (the near
    region, where the interval margin gamma bites).
    """
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    far = LogMagnitude(
        math.log(k.c_eps * math.pi) + 0.5 * c * math.pi * k.r_min**2 * math.log(k.nu0)
    )
    near = LogMagnitude(
        math.log(c) + 0.5 * math.log(k.c_gauss * math.sqrt(2.0)) - 0.25 * math.pi * k.gamma**2 * c
    )
    return log_add(far, near)


@dataclass(frozen=True)
class MainLowerBound:
    """Result of the analytic lower bound 1 - 3 sqrt(2c) alpha^c.

    valid is False while the crude-bound gate alpha^c < 1/(2c) does not hold;
    then value is None and note explains why. gap holds 3 sqrt(2c) alpha^c in
    log scale, since the distance to 1 underflows double precision long
    before the bound stops improving. The derivation also assumes c large
    enough for the final repackaging into delta^c; the gate reports only the
    explicit threshold.
    """

    value: float | None
    valid: bool
    alpha: float
    alpha_pow_c: LogMagnitude
    gap: LogMagnitude
    gate_rhs: float
    note: str

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "valid": self.valid,
            "alpha": self.alpha,
            "log10_alpha_pow_c": self.alpha_pow_c.log10(),
            "log10_gap": self.gap.log10(),
            "gate_rhs": self.gate_rhs,
            "note": self.note,
        }


def main_lower_bound(k: CertificateConstants, c: float, n: int) -> MainLowerBound:
    """Analytic lower bound for lambda_n(c) from the certificate constants.

    Returns 1 - 3 sqrt(2c) alpha^c when the gate alpha^c < 1/(2c) holds
    (the threshold under which the crude Gram bound keeps the system
    linearly independent); otherwise an explicit not-yet-valid status. The
    caller is responsible for n not exceeding the member count of the
    system behind the constants.
    """
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    apc = LogMagnitude(c * math.log(k.alpha))
    gap = LogMagnitude(math.log(3.0 * math.sqrt(2.0 * c)) + apc.log_abs)
    gate_rhs = 1.0 / (2.0 * c)
    if apc.log_abs >= math.log(gate_rhs):
        return MainLowerBound(
            value=None,
            valid=False,
            alpha=k.alpha,
            alpha_pow_c=apc,
            gap=gap,
            gate_rhs=gate_rhs,
            note=(
                f"c too small for this certificate: alpha^c = "
                f"10^{apc.log10():.3f} is not below 1/(2c) = {gate_rhs:.3e}"
            ),
        )
    return MainLowerBound(
        value=1.0 - gap.to_float(),
        valid=True,
        alpha=k.alpha,
        alpha_pow_c=apc,
        gap=gap,
        gate_rhs=gate_rhs,
        note="gate alpha^c < 1/(2c) holds",
    )


def landau_widom(c: float, b: float):
    """Plunge drift: index n = [c + b ln(c) / pi^2] and limit (1 + e^b)^-1.

    The index refers to the classical descending sequence starting at
    lambda_1; convergence to the limit is slow (the drift offset is
    sub-integer until ln(c) > pi^2 / |b|).
    """
    if c <= 1:
        raise ValueError(f"need c > 1, got {c}")
    n = math.floor(c + b * math.log(c) / math.pi**2)
    target = 1.0 / (1.0 + math.exp(b))
    return n, target


def karnik_plunge_bound(c: float, eps: float) -> float:
    """Explicit plunge-size bound (2/pi^2) ln(50c+25) ln(5/(eps(1-eps))) + 7.

    Logs are natural, consistent with the asymptotic form
    log(c) log(1/eps) (2/pi^2 + o(1)).
    """
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    if not 0 < eps < 0.5:
        raise ValueError(f"need 0 < eps < 1/2, got {eps}")
    return (2.0 / math.pi**2) * math.log(50.0 * c + 25.0) * math.log(5.0 / (eps * (1.0 - eps))) + 7.0


@dataclass(frozen=True)
class AsymptoticEstimates:
    """Classical reference values at (c, n).

    bjk_lower is the pre-plunge lower bound 1 - (pi c)^n / n! e^(-pi c / 2)
    in linear scale (may be <= 0, i.e. vacuous; reported as-is). fuchs_gap
    is the fixed-n asymptotic for 1 - lambda_n, widom_decay the fixed-c
    asymptotic for lambda_n, both in log scale.
    """

    bjk_lower: float
    fuchs_gap: LogMagnitude | None
    widom_decay: LogMagnitude


def classical_asymptotics(c: float, n: int) -> AsymptoticEstimates:
    """Evaluate the three classical formulas at (c, n); n is 1-based for the
    fixed-n gap (which uses (n-1)! and so needs n >= 1, else None)."""
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    log_bjk_term = n * math.log(math.pi * c) - math.lgamma(n + 1) - 0.5 * math.pi * c
    bjk_lower = 1.0 - (math.exp(log_bjk_term) if log_bjk_term < 700 else math.inf)
    fuchs = None
    if n >= 1:
        log_fuchs = (
            math.log(math.sqrt(math.pi) / 2.0)
            + n * math.log(8.0)
            - math.lgamma(n)
            + (n - 0.5) * math.log(0.5 * math.pi * c)
            - math.pi * c
        )
        fuchs = LogMagnitude(log_fuchs)
    widom = LogMagnitude((2 * n + 1) * math.log(math.e * math.pi * c / (8 * n + 4)))
    return AsymptoticEstimates(bjk_lower=bjk_lower, fuchs_gap=fuchs, widom_decay=widom)


def bjk_vacuity_threshold(c: float) -> int:
    """Smallest n at which the pre-plunge lower bound goes vacuous."""
    n = 0
    while True:
        if n * math.log(math.pi * c) - math.lgamma(n + 1) - 0.5 * math.pi * c > 0:
            return n
        n += 1
        if n > 10 * c + 100:
            raise RuntimeError("vacuity threshold search ran away")
