"""Command-line front end.

Exit codes: 0 success, 1 parse or I/O failure, 2 domain invariant violation,
3 bound exceeded.  All output is plain text with a stable ordering, so
identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from . import io as fmt
from .chains import (
    STANDARD_FILLINGS,
    FillingSequence,
    block_code_chains,
    is_normal_filling_sequence,
    normal_chain,
    reconstruct_from_chain,
)
from .elementary import (
    ConstructionStrategy,
    construct_elementary_system,
    extract_elementary_system,
    global_group_system,
    recover_original,
    structurally_equal,
)
from .errors import BoundExceeded, DomainError, ParseError, ToolkitError
from .generators import build_context, elementary_group
from .groups import DEFAULT_ORDER_CAP
from .systems import (
    DEFAULT_MEMBER_CAP,
    controllability_index,
    decode_to_tensor,
    encode_spectral_domain,
    encode_time_domain,
    tensor_from_items,
)


@dataclass
class RunConfig:
    member_cap: int = DEFAULT_MEMBER_CAP
    order_cap: int = DEFAULT_ORDER_CAP
    ordering_cap: int = 720
    seed: int = 0
    out: Optional[Path] = None
    fmt: str = "text"
    window: Optional[tuple] = None
    verbose: bool = False

    def __post_init__(self):
        for bound in (self.member_cap, self.order_cap, self.ordering_cap):
            if bound <= 0:
                raise ParseError("bounds must be positive")


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is not None:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str, cfg: RunConfig):
    system = fmt.load_system_file(path, member_cap=cfg.member_cap)
    if cfg.window is not None and system.window != cfg.window:
        raise DomainError(f"system window {system.window} does not match "
                          f"--window {cfg.window}")
    return system


def cmd_validate(args, cfg: RunConfig) -> int:
    system = _load(args.system, cfg)
    system.verify_closure()
    ctx = build_context(system)  # runs the completeness checks
    orders = " ".join(str(g.order) for g in system.alphabets)
    lines = [f"system {system.name} order={len(system)} ell={ctx.ell} "
             f"window={system.window[0]} {system.window[1]} "
             f"alphabets={orders}"]
    if cfg.verbose:
        for slot in ctx.slots:
            lines.append(f"  slot k={slot[0]} t={slot[1]} "
                         f"generators={ctx.basis.label_count(slot)}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_generators(args, cfg: RunConfig) -> int:
    system = _load(args.system, cfg)
    ctx = build_context(system)
    lines = []
    for slot in ctx.slots:
        trans = ctx.basis.transversal(slot)
        lines.append(f"gen k={slot[0]} t={slot[1]} count={len(trans)}")
        for i, g in enumerate(trans):
            lines.append(f"  {i}: " + " ".join(str(x) for x in g))
    if cfg.fmt == "dump":
        for slot in ctx.slots:
            lines.append(fmt.dump_egrp(elementary_group(ctx, *slot)).rstrip("\n"))
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def _read_tensor_file(path: str, basis) -> dict:
    items = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"tensor lines are '<k> <t> <index>', got {raw!r}")
        try:
            items[(int(parts[0]), int(parts[1]))] = int(parts[2])
        except ValueError:
            raise ParseError(f"bad tensor line {raw!r}") from None
    return items


def cmd_encode(args, cfg: RunConfig) -> int:
    system = _load(args.system, cfg)
    ctx = build_context(system)
    items = _read_tensor_file(args.tensor, ctx.basis)
    r = tensor_from_items(ctx.basis, items)
    seq = encode_time_domain(ctx.basis, r)
    lines = ["seq " + " ".join(str(x) for x in seq)]
    if args.spectral:
        spec = encode_spectral_domain(ctx.basis, r)
        lines.append("spectral " + " ".join(str(x) for x in spec))
        lines.append(f"agree {'yes' if spec == seq else 'no'}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_decode(args, cfg: RunConfig) -> int:
    system = _load(args.system, cfg)
    ctx = build_context(system)
    try:
        seq = tuple(int(x) for x in args.seq.split())
    except ValueError:
        raise ParseError(f"bad sequence {args.seq!r}") from None
    r = decode_to_tensor(ctx.basis, seq)
    lines = [f"{slot[0]} {slot[1]} {r[slot]}" for slot in ctx.slots]
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def _parse_walk_file(path: str, window, ell) -> FillingSequence:
    pairs = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"walk lines are '<k> <t>', got {raw!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    return FillingSequence(window, ell, tuple(pairs))


def cmd_chains(args, cfg: RunConfig) -> int:
    system = _load(args.system, cfg)
    ctx = build_context(system)
    if args.filling.startswith("@"):
        from .chains import standard_filling
        f = _parse_walk_file(args.filling[1:], system.window, ctx.ell)
        ok, bad = is_normal_filling_sequence(f)
        if not ok:
            raise DomainError(f"walk is not normal: prefix {bad} "
                              "is not a union of lower triangles")
    else:
        from .chains import standard_filling
        f = standard_filling(system.window, ctx.ell, args.filling)
    chain = normal_chain(ctx, f)
    lines = []
    for i, step in enumerate(chain.steps):
        reps = " ".join(str(lab[ctx.slot_pos[step.pair]])
                        for lab in step.representatives)
        lines.append(f"step {i} add ({step.pair[0]},{step.pair[1]}) "
                     f"cosets {step.label_count} reps {reps}")
    rebuilt = reconstruct_from_chain(ctx, f)
    lines.append(f"reconstruct ok order={len(rebuilt)}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_blockchains(args, cfg: RunConfig) -> int:
    system = _load(args.system, cfg)
    ctx = build_context(system)
    chains, truncated = block_code_chains(ctx, max_orderings=cfg.ordering_cap)
    lines = [f"chains {len(chains)} truncated {'yes' if truncated else 'no'}"]
    for i, chain in enumerate(chains):
        order = 1
        for step in chain.steps:
            order *= step.label_count
        walk = " ".join(f"({p[0]},{p[1]})" for p in chain.filling.pairs)
        lines.append(f"chain {i} order={order} walk {walk}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_esys(args, cfg: RunConfig) -> int:
    system = _load(args.system, cfg)
    ctx = build_context(system)
    es = extract_elementary_system(ctx)
    _emit(cfg, fmt.dump_elementary_system(es))
    return 0


def _parse_kv_groups(pairs: List[str]) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise ParseError(f"expected k=GroupName, got {item!r}")
        k, name = item.split("=", 1)
        out[int(k)] = fmt.resolve_group(name)
    return out


def cmd_construct(args, cfg: RunConfig) -> int:
    if cfg.window is None:
        raise ParseError("construct needs --window t0 t1")
    top = fmt.resolve_group(args.seed_group)
    kernels = _parse_kv_groups(args.kernel)
    ext_indices = {}
    for item in args.ext_index or []:
        k, idx = item.split("=", 1)
        ext_indices[int(k)] = int(idx)
    strategy = ConstructionStrategy(kernels=kernels,
                                    extension_indices=ext_indices)
    es = construct_elementary_system(cfg.window, args.ell, top,
                                     strategy, name=args.name)
    system = global_group_system(es)
    ell = controllability_index(system)
    report = (f"constructed {es.name} depth={es.depth} "
              f"system order={len(system)} ell={ell}\n")
    if cfg.out is not None:
        Path(cfg.out).write_text(fmt.dump_elementary_system(es))
        sys.stdout.write(report)
    else:
        sys.stdout.write(fmt.dump_elementary_system(es) + report)
    return 0


def cmd_roundtrip(args, cfg: RunConfig) -> int:
    path = Path(args.path)
    if path.suffix == ".esys":
        es = fmt.load_elementary_system_file(path)
        system = global_group_system(es)
        re_es = extract_elementary_system(build_context(system))
        match = structurally_equal(es, re_es)
        if match is None:
            raise DomainError("re-extracted elementary system differs")
        _emit(cfg, f"roundtrip ok system order={len(system)} "
                   f"ell={controllability_index(system)}\n")
    else:
        system = _load(str(path), cfg)
        ctx = build_context(system)
        es = extract_elementary_system(ctx)
        recover_original(es, ctx)
        _emit(cfg, f"roundtrip ok order={len(system)}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupsystems",
        description="Analyze finite-window group systems: generators, "
                    "encoders, chains, elementary systems.")
    parser.add_argument("--window", type=int, nargs=2, default=None,
                        metavar=("T0", "T1"),
                        help="expected window; required by construct")
    parser.add_argument("--member-cap", type=int, default=DEFAULT_MEMBER_CAP)
    parser.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP)
    parser.add_argument("--ordering-cap", type=int, default=720)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--format", choices=("text", "dump"), default="text")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a .gsys file and report order/ell")
    p.add_argument("system")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generators", help="list the generator basis per slot")
    p.add_argument("system")
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("encode", help="encode a tensor file into a member")
    p.add_argument("system")
    p.add_argument("tensor")
    p.add_argument("--spectral", action="store_true",
                   help="also run the span-by-span encoder and compare")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a member into its tensor")
    p.add_argument("system")
    p.add_argument("--seq", required=True, help="space-separated letters")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("chains", help="normal chain of a filling walk")
    p.add_argument("system")
    p.add_argument("--filling", default="time_rev",
                   help="|".join(STANDARD_FILLINGS) + " or @walkfile")
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("blockchains", help="all normal chains of a block code")
    p.add_argument("system")
    p.set_defaults(func=cmd_blockchains)

    p = sub.add_parser("esys", help="extract the elementary system")
    p.add_argument("system")
    p.set_defaults(func=cmd_esys)

    p = sub.add_parser("construct", help="build an elementary system from seeds")
    p.add_argument("--seed-group", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--kernel", action="append",
                   help="k=GroupName kernel per depth below the top row")
    p.add_argument("--ext-index", action="append",
                   help="k=index extension choice per depth")
    p.add_argument("--name", default="E")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("roundtrip", help="extract/rebuild and compare")
    p.add_argument("path")
    p.set_defaults(func=cmd_roundtrip)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(member_cap=args.member_cap, order_cap=args.order_cap,
                        ordering_cap=args.ordering_cap, seed=args.seed,
                        out=args.out, fmt=args.format,
                        window=tuple(args.window) if args.window else None,
                        verbose=args.verbose)
        inputs = [getattr(args, name) for name in ("system", "tensor", "path")
                  if getattr(args, name, None) is not None]
        if cfg.out is not None and any(Path(str(p)).resolve() ==
                                       Path(cfg.out).resolve() for p in inputs):
            raise ParseError("--out must differ from the input paths")
        random.seed(cfg.seed)
        return args.func(args, cfg)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return 3
    except ToolkitError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
