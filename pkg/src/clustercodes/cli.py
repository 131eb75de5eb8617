"""Command-line front end.

Subcommands: params, capacity, build, repair, reconstruct, verify, sweep.
Exit codes: 0 success, 1 verification/data failure, 2 parameter or regime
error, 3 I/O or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import codes, harness
from .capacity import capacity_eval
from .errors import (FormatError, InconsistentSharesError, ParamError)
from .galois import field_create
from .placement import (dump_json, load_json, placement_from_obj,
                        placement_to_obj, transcript_to_obj)
from .topology import ClusterTopology, NodeId

EXIT_OK, EXIT_VERIFY, EXIT_PARAM, EXIT_FORMAT = 0, 1, 2, 3


def _rat(x):
    """Exact JSON value: plain int when integral, else a 'p/q' string."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


def parse_node(text: str) -> NodeId:
    try:
        l, j = (int(part) for part in text.split(","))
    except ValueError as e:
        raise ParamError(f"node must be written 'l,j', got {text!r}") from e
    return NodeId(l, j)


def bytes_to_symbols(data: bytes, gf) -> list[int]:
    if gf.m % 8 != 0:
        raise ParamError(f"byte payloads need m in {{8, 16}}, got m={gf.m}")
    width = gf.m // 8
    if len(data) % width != 0:
        raise ParamError(f"payload length {len(data)} is not a multiple of {width}")
    return [int.from_bytes(data[i:i + width], "big") for i in range(0, len(data), width)]


def symbols_to_bytes(symbols: list[int], gf) -> bytes:
    width = gf.m // 8
    return b"".join(s.to_bytes(width, "big") for s in symbols)


def _load_placement(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from e
    return placement_from_obj(load_json(text))


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_params(args) -> int:
    top = ClusterTopology(args.n, args.k, args.L)
    eps = None if args.epsilon is None else codes.parse_rational(args.epsilon)
    if eps is None and args.chi is None:
        eps = Fraction(0)
    chi, eps = codes.resolve_chi(args.chi, eps)
    n, n_i = top.n, top.n_I
    if args.mode == "mbr":
        if eps == 0:
            out = dict(codes.declared_params("mbr0", top), code="mbr0")
        elif chi is not None:
            out = dict(codes.declared_params("mbr", top, chi=chi), code="mbr")
        else:
            # No integer chi: normalize beta_c/beta_I to the reduced fraction.
            beta_c, beta_i = eps.numerator, eps.denominator
            alpha = (n_i - 1) * beta_i + (n - n_i) * beta_c
            out = {"alpha": alpha, "beta_i": beta_i, "beta_c": beta_c,
                   "gamma": alpha, "M": capacity_eval(top, alpha, beta_i, beta_c),
                   "theta": None, "epsilon": eps, "code": None}
    else:
        if top.k >= top.n:
            raise ParamError("minimum-storage parameters need k < n")
        if eps == 0:
            kind = "msr0-div" if top.k % n_i == 0 else "msr0-nondiv"
            out = dict(codes.declared_params(kind, top), code=kind)
        elif eps < Fraction(1, n - top.k):
            raise ParamError(
                f"no minimum-storage construction for 0 < epsilon < 1/(n-k)"
                f"={Fraction(1, n - top.k)}; got {eps}"
            )
        elif chi is not None:
            kind = ("msr-stacked"
                    if n == top.k * top.L and eps == Fraction(1, n - top.k)
                    else "msr-wrapped")
            out = dict(codes.declared_params(kind, top, chi=chi, epsilon=eps),
                       code=kind)
        else:
            alpha = n - top.k
            gamma = Fraction(n - n_i) + Fraction(n_i - 1) / eps
            out = {"alpha": alpha, "beta_i": Fraction(1) / eps, "beta_c": 1,
                   "gamma": gamma, "M": top.k * alpha, "theta": None,
                   "epsilon": eps, "code": None}
    _write(args.out, dump_json({key: _rat(val) for key, val in out.items()}))
    return EXIT_OK


def cmd_capacity(args) -> int:
    top = ClusterTopology(args.n, args.k, args.L)
    value = capacity_eval(top, codes.parse_rational(args.alpha),
                          codes.parse_rational(args.beta_i),
                          codes.parse_rational(args.beta_c))
    _write(args.out, dump_json({"capacity": _rat(value)}))
    return EXIT_OK


def _build_config(args) -> dict:
    obj: dict = {}
    if args.config:
        try:
            obj = load_json(Path(args.config).read_text(encoding="utf-8"))
        except OSError as e:
            raise FormatError(f"cannot read {args.config}: {e}") from e
    for key in ("n", "k", "L", "code", "chi", "epsilon", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            obj[key] = val
    if args.field_m is not None or args.field_poly is not None:
        obj["field"] = {"m": args.field_m or 8,
                        "poly": args.field_poly or field_create(args.field_m or 8).poly}
    return obj


def _generator_matrix(p):
    """The placement's encoding matrix, for debugging dumps."""
    from .mbr import mbr_codec
    from .mdscodec import Matrix
    from .msr import nondiv_codec, stacked_codec, wrapped_codec
    if p.kind in ("mbr0", "mbr"):
        return mbr_codec(p).generator
    if p.kind == "msr0-nondiv":
        return nondiv_codec(p)[1]
    if p.kind == "msr-stacked":
        return stacked_codec(p).generator
    if p.kind == "msr-wrapped":
        base = wrapped_codec(p)
        return Matrix(base.n, 2 * base.alpha, [row[:] for row in base.psi])
    return p.codec.generator  # msr0-div component code


def cmd_build(args) -> int:
    config = codes.parse_config(_build_config(args))
    gf = config["gf"] or codes.default_field(config["kind"], config["topology"],
                                             config["chi"], config["epsilon"])
    try:
        data = Path(args.source).read_bytes()
    except OSError as e:
        raise FormatError(f"cannot read {args.source}: {e}") from e
    source = bytes_to_symbols(data, gf)
    p = codes.build(config["kind"], config["topology"], source, gf,
                    config["chi"], config["epsilon"])
    _write(args.out, dump_json(placement_to_obj(p)))
    if args.dump_generator:
        gen = _generator_matrix(p)
        width = p.gf.m // 4
        rows = (",".join(f"{x:0{width}x}" for x in row) for row in gen.data)
        _write(args.dump_generator, "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_repair(args) -> int:
    p = _load_placement(args.placement)
    failed = parse_node(args.node)
    transcript, regenerated = codes.repair(p, failed)
    _write(args.out_transcript, dump_json(transcript_to_obj(transcript, p.gf)))
    node_obj = {"l": failed.l, "j": failed.j,
                "symbols": [{"idx": idx, "val_hex": f"{val:0{p.gf.m // 4}x}"}
                            for idx, val in regenerated]}
    _write(args.out_node, dump_json(node_obj))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    p = _load_placement(args.placement)
    nodes = [parse_node(text) for text in args.nodes]
    symbols = codes.reconstruct(p, nodes)
    data = symbols_to_bytes(symbols, p.gf)
    if args.out is None or args.out == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(args.out).write_bytes(data)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.acceptance:
        configs = harness.acceptance_systems()
    else:
        if not args.config:
            raise ParamError("verify needs --config or --acceptance")
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as e:
            raise FormatError(f"cannot read {args.config}: {e}") from e
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise FormatError(f"invalid JSON: {e}") from e
        if isinstance(raw, dict):
            raw = [raw]
        configs = [codes.parse_config(obj) for obj in raw]
    reports = harness.run_suite(configs)
    objs = [harness.report_to_obj(r) for r in reports]
    _write(args.out, dump_json(objs[0]) if len(objs) == 1
           else json.dumps(objs, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def _sweep_rows(n_max: int):
    for n in range(2, n_max + 1):
        for big_l in range(1, n + 1):
            if n % big_l != 0:
                continue
            for k in range(1, n):
                yield ClusterTopology(n, k, big_l)


def cmd_sweep(args) -> int:
    lines = ["n,k,L,check,pass"]
    all_ok = True
    for top in _sweep_rows(args.n_max):
        for name, ok in harness.identity_checks(top):
            lines.append(f"{top.n},{top.k},{top.L},{name},{str(ok).lower()}")
            all_ok = all_ok and ok
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if all_ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clustercodes",
        description="Capacity-achieving regenerating codes for clustered storage",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("params", help="emit (alpha, gamma, beta_i, beta_c, M, theta)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--epsilon", help="exact ratio, e.g. 1/4 (default 0)")
    sp.add_argument("--chi", type=int, help="beta_I/beta_c; alternative to --epsilon")
    sp.add_argument("--mode", choices=("mbr", "msr"), required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("capacity", help="evaluate the capacity formula")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--beta-i", dest="beta_i", required=True)
    sp.add_argument("--beta-c", dest="beta_c", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_capacity)

    sp = sub.add_parser("build", help="encode a byte payload into a placement")
    sp.add_argument("--config", help="JSON config; flags override its keys")
    sp.add_argument("--code", choices=("mbr0", "mbr", "msr0-div", "msr0-nondiv",
                                       "msr-stacked", "msr-wrapped"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--L", type=int)
    sp.add_argument("--chi", type=int)
    sp.add_argument("--epsilon")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--field-m", type=int, dest="field_m")
    sp.add_argument("--field-poly", type=int, dest="field_poly")
    sp.add_argument("--source", required=True, help="raw bytes, one per symbol")
    sp.add_argument("--out", required=True)
    sp.add_argument("--dump-generator", dest="dump_generator",
                    help="also write the encoding matrix as hex CSV")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("repair", help="regenerate a failed node")
    sp.add_argument("--placement", required=True)
    sp.add_argument("--node", required=True, help="failed node as 'l,j'")
    sp.add_argument("--out-transcript", dest="out_transcript", required=True)
    sp.add_argument("--out-node", dest="out_node", required=True)
    sp.set_defaults(func=cmd_repair)

    sp = sub.add_parser("reconstruct", help="decode the payload from k nodes")
    sp.add_argument("--placement", required=True)
    sp.add_argument("--nodes", nargs="+", required=True, help="'l,j' per node")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("verify", help="run the verification suite")
    sp.add_argument("--config", help="JSON config object or array")
    sp.add_argument("--acceptance", action="store_true",
                    help="verify the five built-in reference systems")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="closed-form identity checks as CSV")
    sp.add_argument("--n-max", dest="n_max", type=int, default=24)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InconsistentSharesError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except ParamError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAM
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
