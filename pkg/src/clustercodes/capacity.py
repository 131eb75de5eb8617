"""Closed-form parameters: capacity, MBR/MSR resource pairs, g/h/q/r sequences.

Bandwidth ratios are exact Fractions throughout, never floats; regime
boundaries like 1/(n-k) must compare exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import ParamError, RegimeError
from .topology import ClusterTopology

Rational = int | Fraction


@dataclass(frozen=True)
class DerivedParams:
    """Sequences derived from (n, k, L) alone.

    q, r: quotient/remainder of k / n_I.
    g:    per-level contact counts g_1..g_{n_I}, sum(g) = k.
    h:    h_i = min{t : g_1 + ... + g_t >= i}, nondecreasing over [k].
    rho:  rho_i = n_I - i.
    z:    z_t = n_I - h_t over [k].
    tau:  largest t in [0, k] with z_t >= 1 (z_0 = n_I - 1); equals k - q.
    """
    q: int
    r: int
    g: tuple[int, ...]
    h: tuple[int, ...]
    rho: tuple[int, ...]
    z: tuple[int, ...]
    tau: int


def derive(top: ClusterTopology) -> DerivedParams:
    n_i = top.n_I
    q, r = divmod(top.k, n_i)
    g = tuple(q + 1 if m <= r else q for m in range(1, n_i + 1))
    h = []
    acc = 0
    t = 0
    for i in range(1, top.k + 1):
        while acc < i:
            t += 1
            acc += g[t - 1]
        h.append(t)
    z = tuple(n_i - hi for hi in h)
    tau = max((t for t in range(top.k + 1) if (n_i - 1 if t == 0 else z[t - 1]) >= 1),
              default=0)
    return DerivedParams(q, r, g, tuple(h), tuple(n_i - i for i in range(1, n_i + 1)),
                         z, tau)


def capacity_eval(top: ClusterTopology, alpha: Rational, beta_i: Rational,
                  beta_c: Rational) -> Rational:
    """Max file size retrievable from any k nodes at (alpha, beta_I, beta_c).

    The double sum over i in [n_I], j in [g_i] of
    min{alpha, rho_i*beta_I + (n - rho_i - g_1 - ... - g_{i-1} - j)*beta_c}.
    """
    if alpha < 0 or beta_c < 0 or beta_c > beta_i:
        raise ParamError("need alpha >= 0 and 0 <= beta_c <= beta_I")
    d = derive(top)
    total: Rational = 0
    g_prefix = 0
    for i in range(1, top.n_I + 1):
        rho = top.n_I - i
        for j in range(1, d.g[i - 1] + 1):
            total += min(alpha, rho * beta_i + (top.n - rho - g_prefix - j) * beta_c)
        g_prefix += d.g[i - 1]
    return total


def s_zero(top: ClusterTopology, eps: Fraction) -> Fraction:
    """The MBR normalization constant s_0 for bandwidth ratio eps."""
    d = derive(top)
    n, n_i = top.n, top.n_I
    num = sum(Fraction(n_i - h) + eps * (n - n_i - i + h)
              for i, h in enumerate(d.h, start=1))
    den = (n_i - 1) + eps * (n - n_i)
    return Fraction(num, den)


def _check_eps(eps: Fraction) -> Fraction:
    eps = Fraction(eps)
    if not 0 <= eps <= 1:
        raise ParamError(f"bandwidth ratio {eps} outside [0, 1]")
    return eps


def mbr_point(top: ClusterTopology, eps: Fraction, file_size: Rational
              ) -> tuple[Fraction, Fraction]:
    """(alpha, gamma) of the minimum-bandwidth point; both equal M / s_0."""
    eps = _check_eps(eps)
    if file_size <= 0:
        raise ParamError("file size must be positive")
    a = Fraction(file_size) / s_zero(top, eps)
    return a, a


def msr_point(top: ClusterTopology, eps: Fraction, file_size: Rational
              ) -> tuple[Fraction, Fraction]:
    """(alpha, gamma) of the minimum-storage point.

    Supported regimes: eps = 0, and 1/(n-k) <= eps <= 1 where alpha = M/k is
    attainable. In between, minimum storage exceeds M/k and no construction
    is provided.
    """
    eps = _check_eps(eps)
    if top.k >= top.n:
        raise ParamError("minimum-storage point needs k < n")
    if eps == 0:
        if top.n_I == 1:
            raise ParamError(
                "single-node clusters cannot repair without cross-cluster traffic"
            )
        d = derive(top)
        alpha = Fraction(file_size, top.k - d.q)
        return alpha, alpha * (top.n_I - 1)
    if eps < Fraction(1, top.n - top.k):
        raise RegimeError(
            f"no minimum-storage construction for 0 < eps < 1/(n-k)={Fraction(1, top.n - top.k)}: "
            f"storage per node necessarily exceeds M/k there"
        )
    alpha = Fraction(file_size, top.k)
    gamma = alpha * (top.n - top.n_I + Fraction(top.n_I - 1) / eps) / (top.n - top.k)
    return alpha, gamma


def mbr_filesize_zero(top: ClusterTopology) -> int:
    """File size of the eps=0 MBR code at beta_I=1: sum of (n_I - h_i)."""
    d = derive(top)
    return sum(top.n_I - h for h in d.h)


def mbr_filesize_pos(top: ClusterTopology, chi: int) -> int:
    """File size of the 0<eps<=1 MBR code at beta_I=chi, beta_c=1.

    k*alpha - (chi-1)*(q*n_I^2 + r^2 - k)/2 - k*(k-1)/2 with
    alpha = (n_I-1)*chi + (n - n_I).
    """
    if chi < 1:
        raise ParamError(f"chi must be a positive integer, got {chi}")
    q, r = divmod(top.k, top.n_I)
    alpha = (top.n_I - 1) * chi + (top.n - top.n_I)
    penalty = (chi - 1) * (q * top.n_I ** 2 + r ** 2 - top.k)
    assert penalty % 2 == 0
    return top.k * alpha - penalty // 2 - comb(top.k, 2)


def mbr_theta_zero(top: ClusterTopology) -> int:
    """Codeword length of the eps=0 MBR code: C(n_I,2) * L."""
    return comb(top.n_I, 2) * top.L


def mbr_theta_pos(top: ClusterTopology, chi: int) -> int:
    """Codeword length of the 0<eps<=1 MBR code: (chi-1)*C(n_I,2)*L + C(n,2)."""
    return (chi - 1) * comb(top.n_I, 2) * top.L + comb(top.n, 2)
