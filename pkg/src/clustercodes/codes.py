"""Kind-keyed dispatch over the code constructions plus config handling."""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from . import mbr, msr
from .capacity import (derive, mbr_filesize_pos, mbr_filesize_zero,
                       mbr_theta_pos, mbr_theta_zero)
from .errors import FormatError, ParamError, RegimeError
from .galois import GF, field_create, field_for_codeword_length
from .placement import KINDS, Holding, Placement, RepairTranscript
from .topology import ClusterTopology, NodeId


def parse_rational(text: str | int | Fraction) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ParamError(f"not an exact rational: {text!r}") from e


def resolve_chi(chi: int | None, epsilon: Fraction | None) -> tuple[int | None, Fraction | None]:
    """Normalize the chi/epsilon pair; exactly one may be given."""
    if chi is not None and chi < 1:
        raise ParamError(f"chi must be a positive integer, got {chi}")
    if chi is not None and epsilon is not None and Fraction(1, chi) != epsilon:
        raise ParamError(f"chi={chi} and epsilon={epsilon} disagree")
    if chi is None and epsilon is not None and epsilon > 0:
        if epsilon.numerator != 1:
            return None, epsilon
        chi = epsilon.denominator
    if chi is not None and epsilon is None:
        epsilon = Fraction(1, chi)
    return chi, epsilon


def declared_params(kind: str, top: ClusterTopology, chi: int | None = None,
                    epsilon: Fraction | None = None) -> dict[str, Any]:
    """Per-instance (alpha, beta_i, beta_c, gamma, M, theta) for a construction."""
    n, k, n_i = top.n, top.k, top.n_I
    chi, epsilon = resolve_chi(chi, epsilon)
    if n_i < 2 and kind in ("mbr0", "mbr", "msr0-div", "msr0-nondiv"):
        raise ParamError(f"{kind} needs clusters of n_I >= 2 nodes, got n_I={n_i}")
    if kind == "mbr0":
        m_size = mbr_filesize_zero(top)
        return {"alpha": n_i - 1, "beta_i": 1, "beta_c": 0, "gamma": n_i - 1,
                "M": m_size, "theta": mbr_theta_zero(top), "epsilon": Fraction(0)}
    if kind == "mbr":
        if chi is None:
            raise ParamError("the positive-ratio bandwidth code needs integer 1/epsilon")
        alpha = (n_i - 1) * chi + (n - n_i)
        return {"alpha": alpha, "beta_i": chi, "beta_c": 1, "gamma": alpha,
                "M": mbr_filesize_pos(top, chi), "theta": mbr_theta_pos(top, chi),
                "chi": chi, "epsilon": Fraction(1, chi)}
    if kind == "msr0-div":
        if k % n_i != 0:
            raise RegimeError(f"msr0-div needs n_I | k (n_I={n_i}, k={k})")
        return {"alpha": n_i, "beta_i": n_i, "beta_c": 0, "gamma": (n_i - 1) * n_i,
                "M": k * (n_i - 1), "theta": n * n_i, "epsilon": Fraction(0)}
    if kind == "msr0-nondiv":
        if k % n_i == 0:
            raise RegimeError(f"msr0-nondiv needs n_I to not divide k (n_I={n_i}, k={k})")
        m_size = k - derive(top).q
        return {"alpha": 1, "beta_i": 1, "beta_c": 0, "gamma": n_i - 1,
                "M": m_size, "theta": n, "epsilon": Fraction(0)}
    if kind == "msr-stacked":
        if n != k * top.L:
            raise RegimeError(f"msr-stacked needs n = k*L (n={n}, k*L={k * top.L})")
        if epsilon is not None and epsilon != Fraction(1, n - k):
            raise RegimeError(f"msr-stacked fixes epsilon = 1/(n-k); got {epsilon}")
        return {"alpha": n - k, "beta_i": n - k, "beta_c": 1, "gamma": k * (n - k),
                "M": k * (n - k), "theta": n * (n - k), "epsilon": Fraction(1, n - k)}
    if kind == "msr-wrapped":
        if epsilon is None:
            raise ParamError("msr-wrapped needs an epsilon in [1/(n-k), 1]")
        if chi is None:
            raise ParamError(f"1/epsilon must be a positive integer, got {epsilon}")
        if not Fraction(1, n - k) <= epsilon <= 1:
            raise RegimeError(f"msr-wrapped covers 1/(n-k) <= eps <= 1; got {epsilon}")
        return {"alpha": n - k, "beta_i": chi, "beta_c": 1,
                "gamma": (n_i - 1) * chi + (n - n_i),
                "M": k * (n - k), "theta": n * (n - k), "chi": chi, "epsilon": epsilon}
    raise ParamError(f"unknown code kind {kind!r}")


def points_needed(kind: str, top: ClusterTopology, chi: int | None = None,
                  epsilon: Fraction | None = None) -> int:
    """Distinct evaluation points a construction consumes (theta or n)."""
    if kind in ("mbr0", "mbr"):
        return declared_params(kind, top, chi, epsilon)["theta"]
    return top.n


def default_field(kind: str, top: ClusterTopology, chi: int | None = None,
                  epsilon: Fraction | None = None) -> GF:
    """GF(2^8) when it fits, otherwise promoted to GF(2^16)."""
    return field_for_codeword_length(points_needed(kind, top, chi, epsilon))


def build(kind: str, top: ClusterTopology, source: list[int], gf: GF,
          chi: int | None = None, epsilon: Fraction | None = None) -> Placement:
    chi, epsilon = resolve_chi(chi, epsilon)
    if kind == "mbr0":
        return mbr.build_mbr_zero(top, source, gf)
    if kind == "mbr":
        if chi is None:
            raise ParamError(
                f"1/epsilon must be a positive integer for the bandwidth code, "
                f"got epsilon={epsilon}"
            )
        return mbr.build_mbr_pos(top, chi, source, gf)
    if kind == "msr0-div":
        return msr.build_msr_div(top, source, gf)
    if kind == "msr0-nondiv":
        return msr.build_msr_nondiv(top, source, gf)
    if kind == "msr-stacked":
        if epsilon is not None and epsilon != Fraction(1, top.n - top.k):
            raise RegimeError(f"msr-stacked fixes epsilon = 1/(n-k); got {epsilon}")
        return msr.build_msr_stacked(top, source, gf)
    if kind == "msr-wrapped":
        if epsilon is None:
            raise ParamError("msr-wrapped needs an epsilon in [1/(n-k), 1]")
        return msr.build_msr_wrapped(top, epsilon, source, gf)
    raise ParamError(f"unknown code kind {kind!r}")


def repair(p: Placement, failed: NodeId) -> tuple[RepairTranscript, Holding]:
    if p.kind in ("mbr0", "mbr"):
        return mbr.repair_mbr(p, failed)
    if p.kind == "msr0-div":
        return msr.repair_msr_div(p, failed)
    if p.kind == "msr0-nondiv":
        return msr.repair_msr_nondiv(p, failed)
    if p.kind == "msr-stacked":
        return msr.repair_msr_stacked(p, failed)
    if p.kind == "msr-wrapped":
        return msr.repair_msr_wrapped(p, failed)
    raise ParamError(f"unknown code kind {p.kind!r}")


def regenerate(p: Placement, transcript: RepairTranscript) -> Holding:
    """Rebuild the failed node's holdings from transcript contents alone."""
    if p.kind in ("mbr0", "mbr"):
        return mbr.regenerate_from_transcript(p, transcript)
    if p.kind == "msr0-div":
        return msr.regenerate_msr_div(p, transcript)
    if p.kind == "msr0-nondiv":
        return msr.regenerate_msr_nondiv(p, transcript)
    if p.kind == "msr-stacked":
        return msr.regenerate_msr_stacked(p, transcript)
    if p.kind == "msr-wrapped":
        return msr.regenerate_msr_wrapped(p, transcript)
    raise ParamError(f"unknown code kind {p.kind!r}")


def reconstruct(p: Placement, nodes: list[NodeId]) -> list[int]:
    if p.kind in ("mbr0", "mbr"):
        return mbr.reconstruct_mbr(p, nodes)
    if p.kind == "msr0-div":
        return msr.reconstruct_msr_div(p, nodes)
    if p.kind == "msr0-nondiv":
        return msr.reconstruct_msr_nondiv(p, nodes)
    if p.kind == "msr-stacked":
        return msr.reconstruct_msr_stacked(p, nodes)
    if p.kind == "msr-wrapped":
        return msr.reconstruct_msr_wrapped(p, nodes)
    raise ParamError(f"unknown code kind {p.kind!r}")


def parse_config(obj: dict) -> dict[str, Any]:
    """Validate a config object: n, k, L, code, chi|epsilon, field, seed, expect.

    Out-of-range parameter values surface as ParamError; structural problems
    (missing keys, wrong types, unknown kinds) as FormatError.
    """
    try:
        top = ClusterTopology(int(obj["n"]), int(obj["k"]), int(obj["L"]))
        kind = obj["code"]
        if kind not in KINDS:
            raise FormatError(f"unknown code kind {kind!r}")
        chi = obj.get("chi")
        epsilon = parse_rational(obj["epsilon"]) if "epsilon" in obj else None
        if "field" in obj:
            fobj = obj["field"]
            gf = field_create(int(fobj["m"]), int(fobj["poly"]))
        else:
            gf = None  # promoted automatically once the code size is known
        return {"topology": top, "kind": kind, "chi": chi, "epsilon": epsilon,
                "gf": gf, "seed": int(obj.get("seed", 0)),
                "expect": obj.get("expect", {})}
    except (FormatError, ParamError):
        raise
    except KeyError as e:
        raise FormatError(f"config missing key {e}") from e
    except (TypeError, ValueError) as e:
        raise FormatError(f"bad config value: {e}") from e
