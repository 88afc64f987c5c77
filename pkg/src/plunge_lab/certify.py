"""Numerical certification of eigenvalue lower bounds via min-max.

Pipeline: build a packing covering at least 1 - eps, realize the shifted
Hermite system at time-bandwidth c, pick n = floor((1 - eps) c) members, and
compute the generalized Rayleigh value

    min over the span of  <S f, f> / <f, f>  =  min eig of the pencil (A, B)

with B the closed-form Gram matrix and A_ij the quadrature of
g_i(xi) conj(g_j(xi)) over J, where g_i(xi) = integral_I f_i(x) e^{-2 pi i x xi} dx.
By min-max this value is a true lower bound for lambda_n(c); the report puts
it side by side with the analytic bound 1 - 3 sqrt(2c) alpha^c (with its
validity gate) and the Nystrom reference eigenvalue.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import bounds as bounds_mod
from .fock import SystemMember, build_system, eval_member, eval_member_fourier, gram_block
from .numerics import (
    QuadratureRule,
    SymMatrix,
    gauss_legendre_rule,
    hermitian_embed,
    pencil_eigen_min,
    symmetric_eigen,
)
from .packing import Packing, covering_packing
from .prolate import default_nodes, prolate_spectrum

# Members whose closed-form Gram overlap with an already selected member
# exceeds this are skipped by the "concentrated" strategy: stacking
# near-duplicate Gaussians from adjacent grid cells destroys the pencil's
# conditioning without adding localization.
COHERENCE_CAP = 0.5


@dataclass(frozen=True)
class ResidualTriple:
    """Out-of-interval norms of one member: time side, frequency side, and
    the full operator residual ||(Id - S) f||."""

    time_res: float
    freq_res: float
    total_res: float


def interval_rule(c: float, n_nodes: int | None = None) -> QuadratureRule:
    """Gauss-Legendre rule on I = J = [-sqrt(c)/2, sqrt(c)/2]."""
    half = math.sqrt(c) / 2.0
    if n_nodes is None:
        n_nodes = default_nodes(c)
    return gauss_legendre_rule(n_nodes, -half, half)


def _check_rule(c: float, rule: QuadratureRule):
    half = math.sqrt(c) / 2.0
    if abs(rule.a + half) > 1e-12 or abs(rule.b - half) > 1e-12:
        raise ValueError("rule must span [-sqrt(c)/2, sqrt(c)/2]")
    if rule.n < 10 * c:
        raise ValueError(
            f"rule too coarse: {rule.n} nodes < 10 c = {10 * c:.0f} "
            f"(truncated-Fourier integrals would alias)"
        )


def _fourier_on_interval(members, c: float, rule: QuadratureRule) -> np.ndarray:
    """Matrix of g_i(xi_q) = integral_I f_i(x) e^{-2 pi i x xi_q} dx."""
    x = rule.nodes
    fvals = np.array([eval_member(m, x) for m in members])
    kernel = np.exp(-2j * math.pi * np.outer(x, rule.nodes))
    return (fvals * rule.weights) @ kernel


def localized_gram(members, c: float, rule: QuadratureRule | None = None) -> np.ndarray:
    """Quadratic form of the localization operator on the members.

    A_ij = integral_J g_i(xi) conj(g_j(xi)) dxi = <S f_i, f_j>; Hermitian,
    positive semidefinite, and dominated by the Gram matrix (S <= Id).
    """
    if not members:
        raise ValueError("need at least one member")
    if rule is None:
        rule = interval_rule(c)
    _check_rule(c, rule)
    g = _fourier_on_interval(members, c, rule)
    a = (g * rule.weights) @ g.conj().T
    n = a.shape[0]
    iu = np.triu_indices(n, k=1)
    a[iu[1], iu[0]] = a[iu].conj()
    a[np.diag_indices(n)] = a.diagonal().real
    return a


def residual_norms(s: SystemMember, c: float, rule: QuadratureRule | None = None) -> ResidualTriple:
    """Residual norms of one member on I = J = [-sqrt(c)/2, sqrt(c)/2].

    time_res^2 = 1 - integral_I |f|^2; freq_res^2 = 1 - integral_J |hat f|^2
    with the closed-form transform (no numerical FT needed); total_res is
    ||(Id - S) f|| via the truncated-Fourier quadrature.
    """
    if rule is None:
        rule = interval_rule(c)
    _check_rule(c, rule)
    x = rule.nodes
    w = rule.weights
    fvals = eval_member(s, x)
    t2 = 1.0 - float(np.sum(w * np.abs(fvals) ** 2))
    fhat = eval_member_fourier(s, x)
    f2 = 1.0 - float(np.sum(w * np.abs(fhat) ** 2))
    g = (fvals * w) @ np.exp(-2j * math.pi * np.outer(x, x))
    sff = float(np.sum(w * np.abs(g) ** 2))  # <S f, f>
    sf = (g * w) @ np.exp(2j * math.pi * np.outer(x, x))  # S f on the I nodes
    sf2 = float(np.sum(w * np.abs(sf) ** 2))  # ||S f||^2
    s2 = 1.0 - 2.0 * sff + sf2
    return ResidualTriple(
        time_res=math.sqrt(max(t2, 0.0)),
        freq_res=math.sqrt(max(f2, 0.0)),
        total_res=math.sqrt(max(s2, 0.0)),
    )


# ---------------------------------------------------------------------------
# member selection
# ---------------------------------------------------------------------------

def concentration_score(m: SystemMember, c: float) -> float:
    """Analytic tail-bound proxy used to order members (smaller = stronger).

    The member occupies the phase-space disk of radius
    rho_k = sqrt((2k+1)/(2 pi)) around its center; the score is the signed
    negative squared margin -pi * margin^2 between that disk and the square
    [-sqrt(c)/2, sqrt(c)/2]^2 (positive once the disk pokes outside), the
    exponent scale of the member's Gaussian tail beyond the interval.
    """
    half = math.sqrt(c) / 2.0
    rho = math.sqrt((2 * m.degree + 1) / (2 * math.pi))
    margin = half - max(abs(m.x0), abs(m.xi0)) - rho
    return -math.copysign(margin * margin, margin) * math.pi


def select_members(system, n: int, strategy: str = "concentrated", coherence_cap: float = COHERENCE_CAP):
    """Pick the n members spanning the certificate subspace.

    "concentrated": ascending analytic tail score, greedily skipping any
    candidate whose closed-form Gram overlap with an already chosen member
    exceeds coherence_cap (near-duplicates add no localization but wreck the
    pencil's conditioning). "lexicographic": the first n members in (disk,
    degree) order, for reproducibility comparisons.
    """
    members = list(system.members)
    if n > len(members):
        raise ValueError(
            f"requested subset of size {n} but the system has only "
            f"{len(members)} members (raise the packing rounds or lower eps)"
        )
    if strategy == "lexicographic":
        return members[:n]
    if strategy != "concentrated":
        raise ValueError(f"unknown selection strategy {strategy!r}")
    order = sorted(range(len(members)), key=lambda i: (concentration_score(members[i], system.c), i))
    chosen: list[int] = []
    for i in order:
        if len(chosen) == n:
            break
        cand = members[i]
        ok = True
        for j in chosen:
            other = members[j]
            if other.disk_index == cand.disk_index:
                continue  # same-disk members are exactly orthogonal
            overlap = abs(gram_block([cand, other])[0, 1])
            if overlap > coherence_cap:
                ok = False
                break
        if ok:
            chosen.append(i)
    if len(chosen) < n:
        raise ValueError(
            f"could not assemble {n} members under the coherence cap "
            f"{coherence_cap}; got {len(chosen)}"
        )
    return [members[i] for i in chosen]


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertificateReport:
    """Side-by-side record of the three routes to a lower bound."""

    c: float
    eps: float
    n: int
    strategy: str
    members: tuple
    rayleigh_lower: float
    analytic: bounds_mod.MainLowerBound
    nystrom_reference: float
    reference_index: int
    residual_table: tuple
    gram_max_offdiag: float
    gram_min_eig: float
    rule_nodes: int
    packing_coverage: float
    packing_gamma: float

    def to_json_dict(self) -> dict:
        return {
            "c": self.c,
            "eps": self.eps,
            "n": self.n,
            "strategy": self.strategy,
            "members": [
                {
                    "disk": m.disk_index,
                    "degree": m.degree,
                    "x0": m.x0,
                    "xi0": m.xi0,
                }
                for m in self.members
            ],
            "rayleigh_lower": self.rayleigh_lower,
            "analytic_lower": self.analytic.to_json_dict(),
            "nystrom_reference": self.nystrom_reference,
            "reference_index": self.reference_index,
            "residuals": [
                {"time": r.time_res, "freq": r.freq_res, "total": r.total_res}
                for r in self.residual_table
            ],
            "gram_max_offdiag": self.gram_max_offdiag,
            "gram_min_eig": self.gram_min_eig,
            "rule_nodes": self.rule_nodes,
            "packing": {
                "coverage": self.packing_coverage,
                "gamma": self.packing_gamma,
            },
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)

    def csv_summary_row(self) -> str:
        analytic = self.analytic.value if self.analytic.valid else float("nan")
        return ",".join(
            [
                f"{self.c:.12e}",
                f"{self.eps:.12e}",
                str(self.n),
                f"{self.rayleigh_lower:.12e}",
                f"{analytic:.12e}",
                f"{self.nystrom_reference:.12e}",
                f"{self.gram_min_eig:.12e}",
                f"{self.gram_max_offdiag:.12e}",
            ]
        )

    @staticmethod
    def csv_header() -> str:
        return "c,eps,n,rayleigh_lower,analytic_lower,nystrom_reference,gram_min_eig,gram_max_offdiag"


def certify_lower_bound(
    c: float,
    eps: float,
    rounds: int,
    n_cap: int = 20000,
    strategy: str = "concentrated",
    rule_nodes: int | None = None,
    alpha: float | None = None,
    packing: Packing | None = None,
    nystrom=None,
) -> CertificateReport:
    """Full certification run for (c, eps) with a rounds-deep packing.

    A precomputed packing or Nystrom spectrum may be passed to avoid
    recomputation in sweeps. Raises when the packing cannot cover 1 - eps,
    when the system is smaller than n, or when the Gram matrix is
    numerically singular.
    """
    if c <= 0:
        raise ValueError(f"need c > 0, got {c}")
    if not 0 < eps < 1:
        raise ValueError(f"need 0 < eps < 1, got {eps}")
    if packing is None:
        packing = covering_packing(rounds, n_cap)
    if packing.coverage < 1.0 - eps:
        raise ValueError(
            f"packing covers {packing.coverage:.6f} < 1 - eps = {1 - eps:.6f}; "
            f"use at least {math.ceil(math.log2(1.0 / eps))} rounds"
        )
    n = math.floor((1.0 - eps) * c)
    if n < 1:
        raise ValueError(f"subset size floor((1-eps)c) = {n} must be >= 1")
    system = build_system(packing, c)
    members = select_members(system, n, strategy=strategy)
    rule = interval_rule(c, rule_nodes)
    gram = gram_block(members)
    amat = localized_gram(members, c, rule)
    rayleigh = pencil_eigen_min(hermitian_embed(amat), hermitian_embed(gram))
    gram_eigs, _ = symmetric_eigen(hermitian_embed(gram))
    offdiag = gram.copy()
    np.fill_diagonal(offdiag, 0.0)
    residuals = tuple(residual_norms(m, c, rule) for m in members)
    constants = bounds_mod.certificate_constants(packing, alpha=alpha)
    analytic = bounds_mod.main_lower_bound(constants, c, n)
    if nystrom is None:
        nystrom = prolate_spectrum(c)
    reference = float(nystrom.eigenvalues[n])
    return CertificateReport(
        c=c,
        eps=eps,
        n=n,
        strategy=strategy,
        members=tuple(members),
        rayleigh_lower=float(rayleigh),
        analytic=analytic,
        nystrom_reference=reference,
        reference_index=n,
        residual_table=residuals,
        gram_max_offdiag=float(np.max(np.abs(offdiag))),
        gram_min_eig=float(gram_eigs[-1]),
        rule_nodes=rule.n,
        packing_coverage=packing.coverage,
        packing_gamma=packing.gamma,
    )
