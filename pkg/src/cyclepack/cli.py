"""Command-line entry point: ``cyclepack <command> ...``.

Commands::

    gen NAME [PARAM ...]      write a generated instance
    pack GRAPH                find k cycles of congestion <= p through terminals
    partition FILE            segment pairs of an ordered bipartite graph
    oracle GRAPH              exact fvs / packing numbers (gap report)
    witness GRAPH             build a separation, well-linkedness or dtw certificate
    verify GRAPH CERT         check a certificate independently

Exit status: 0 when a certificate was produced or verified, 1 for a
failure report or a rejected certificate, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .certificates import verify_certificate
from .digraph import format_dot, format_edgelist, read_graph
from .errors import (BadSpec, CapExceeded, CyclePackError, InvalidGraph,
                     InvalidWitness, BoundNotMet, UnknownKind)
from .extraction import Constants, CyclePackingCert, DriverTrace, pack_cycles
from .generators import GENERATORS, InstanceSpec, generate
from .linkage import DEFAULT_WELL_LINKED_CAP, is_well_linked
from .oracles import CYCLE_CAP, FVS_CAP, gap_report, max_packing_congestion, min_fvs, reports_to_csv
from .partition import OrderedBipartite, disjoint_pairs, partition_segments
from .witness import (DEFAULT_SEPARATION_CAP, GridWitness, LinkagePairWitness,
                      balanced_separation, verify_grid_witness, verify_linkage_pair_witness)

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(payload, out: str | None) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_graph(args):
    try:
        return read_graph(args.graph, args.format)
    except OSError as exc:
        raise UsageError(f"cannot read {args.graph}: {exc}") from None
    except (InvalidGraph, ValueError) as exc:
        raise UsageError(f"bad graph file {args.graph}: {exc}") from None


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not JSON: {exc}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def _terminals(args) -> list[int]:
    if args.terminals is not None:
        return _int_list(args.terminals)
    if args.annotations is not None:
        notes = _load_json(args.annotations)
        notes = notes.get("annotations", notes)
        if "D" not in notes:
            raise UsageError(f"{args.annotations} has no 'D' entry")
        return [int(v) for v in notes["D"]]
    raise UsageError("give the terminal set with --terminals or --annotations")


# -- commands ---------------------------------------------------------------

def cmd_gen(args) -> int:
    spec = InstanceSpec(args.name, tuple(args.params), args.seed)
    inst = generate(spec)
    text = format_dot(inst.graph) if args.format == "dot" else format_edgelist(inst.graph)
    if args.graph_out:
        with open(args.graph_out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.out:
        _emit({"schema": 1, "kind": "instance", "spec": spec.to_json(),
               "annotations": inst.to_json()}, args.out)
    return OK


def cmd_pack(args) -> int:
    graph = _load_graph(args)
    D = _terminals(args)
    overrides = {key: getattr(args, key) for key in ("d", "a", "b", "q")
                 if getattr(args, key) is not None}
    if overrides and args.constants == "paper":
        raise UsageError("--d/--a/--b/--q only apply to --constants scaled")
    constants = Constants.scaled(args.k, args.p, **overrides) if overrides else None
    if constants is None and args.constants == "scaled" and args.annotations is not None:
        notes = _load_json(args.annotations)
        planted = notes.get("annotations", notes).get("constants")
        if planted is not None:  # generators that steer the driver record their constants
            constants = Constants(*planted)
    trace = DriverTrace()
    result = pack_cycles(graph, D, args.k, args.p, mode=args.constants,
                         constants=constants, cap=args.cap, trace=trace)
    body = result.to_json()
    if args.trace:
        body["trace"] = trace.stages
    _emit(body, args.out)
    return OK if isinstance(result, CyclePackingCert) else FAILED


def _read_bipartite(path: str) -> OrderedBipartite:
    try:
        with open(path) as fh:
            tokens = fh.read().split()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        nums = [int(t) for t in tokens]
        a, b, m = nums[:3]
        pairs = nums[3:]
        if len(pairs) != 2 * m:
            raise ValueError(f"header announces {m} edges, found {len(pairs) / 2:g}")
        return OrderedBipartite(a, b, [pairs[i:i + 2] for i in range(0, len(pairs), 2)])
    except ValueError as exc:
        raise UsageError(f"bad bipartite file {path}: {exc}") from None


def cmd_partition(args) -> int:
    graph = _read_bipartite(args.file)
    check = not args.unchecked
    if args.pairs is not None:
        pairs = disjoint_pairs(graph, args.pairs, args.r, check=check)
        mode = {"k": args.pairs, "r": str(args.r)}
    else:
        pairs = partition_segments(graph, args.h, args.d, check=check)
        mode = {"h": args.h, "d": str(args.d)}
    _emit({"schema": 1, "kind": "segment_pairs", **mode,
           "pairs": [p.to_json() for p in pairs],
           "edges": [graph.count(p) for p in pairs]}, args.out)
    return OK


def cmd_oracle(args) -> int:
    graph = _load_graph(args)
    if args.what == "report":
        rep = gap_report(graph, fvs_cap=args.cap, cycle_cap=args.cycle_cap, distinct=args.distinct)
        _emit(reports_to_csv([rep]) if args.csv else rep.to_json(), args.out)
        return OK if rep.ok else FAILED
    if args.what == "fvs":
        size, fvs = min_fvs(graph, args.cap)
        _emit({"schema": 1, "kind": "fvs", "size": size, "vertices": sorted(fvs)}, args.out)
        return OK
    size, cycles = max_packing_congestion(graph, args.congestion, args.distinct, args.cycle_cap)
    cert = CyclePackingCert(tuple(cycles), args.congestion, size)
    _emit(cert.to_json(), args.out)
    return OK


def cmd_witness(args) -> int:
    graph = _load_graph(args)
    if args.kind == "separation":
        if args.W is None or args.w is None:
            raise UsageError("separation needs --W and --w")
        W = _int_list(args.W)
        sep = balanced_separation(graph, W, args.w, cap=args.cap or DEFAULT_SEPARATION_CAP)
        if sep is None:
            _emit({"schema": 1, "kind": "failure", "stage": "separation",
                   "reason": f"no balanced separation of order <= {args.w}", "data_ref": None},
                  args.out)
            return FAILED
        _emit(sep.to_json(W, args.w), args.out)
        return OK
    if args.kind == "well-linked":
        if args.W is None:
            raise UsageError("well-linked needs --W")
        report = is_well_linked(graph, _int_list(args.W), cap=args.cap or DEFAULT_WELL_LINKED_CAP)
        _emit(report.to_json(), args.out)
        return OK if report.verdict else FAILED
    if args.witness is None:
        raise UsageError(f"{args.kind} needs --witness FILE")
    body = _load_json(args.witness)
    body = body.get("annotations", body)
    body = body.get("witness", body)
    try:
        if args.kind == "grid":
            cert = verify_grid_witness(graph, GridWitness.from_json(body))
        else:
            cert = verify_linkage_pair_witness(graph, LinkagePairWitness.from_json(body))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed witness: {exc}") from None
    except (InvalidWitness, BoundNotMet) as exc:
        _emit({"schema": 1, "kind": "failure", "stage": "witness", "reason": str(exc),
               "data_ref": getattr(exc, "clause", None)}, args.out)
        return FAILED
    _emit(cert.to_json(), args.out)
    return OK


def cmd_verify(args) -> int:
    graph = _load_graph(args)
    cert = _load_json(args.cert)
    ok, diagnostics = verify_certificate(graph, cert)
    _emit({"schema": 1, "kind": "verification", "accepted": ok, "diagnostics": diagnostics},
          args.out)
    return OK if ok else FAILED


# -- argument parsing -------------------------------------------------------

def _number(text: str):
    """An exact rational from ``3``, ``0.5`` or ``2/3``."""
    from fractions import Fraction
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclepack", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_input(p):
        p.add_argument("graph", help="graph file (edge list 'n m' + arcs, or DOT)")
        p.add_argument("--format", choices=("edgelist", "dot"), default=None,
                       help="input format (default: by file extension)")
        p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("name", choices=sorted(GENERATORS))
    p.add_argument("params", nargs="*", help="positional generator parameters")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("edgelist", "dot"), default="edgelist")
    p.add_argument("--graph-out", help="write the graph here instead of stdout")
    p.add_argument("--out", help="write annotations (terminals, planted structure) as JSON")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("pack", help="run the cycle-packing driver")
    graph_input(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, required=True, choices=(2, 3, 4))
    p.add_argument("--terminals", help="comma-separated well-linked set D")
    p.add_argument("--annotations", help="JSON file with a 'D' entry (as written by gen --out)")
    p.add_argument("--constants", choices=("paper", "scaled"), default="scaled")
    p.add_argument("--d", type=_number)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--cap", type=int, default=DEFAULT_WELL_LINKED_CAP,
                   help="largest terminal set checked exhaustively for well-linkedness")
    p.add_argument("--trace", action="store_true", help="include the stage trace")
    p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; the driver is deterministic")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("partition", help="segment pairs of an ordered bipartite graph")
    p.add_argument("file", help="'a b m' followed by m index pairs")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--h", type=int, help="depth: 2^h segment pairs with >= d*n edges")
    group.add_argument("--pairs", type=int, help="k pairs of average degree >= r")
    p.add_argument("--d", type=_number, default=None)
    p.add_argument("--r", type=_number, default=1)
    p.add_argument("--unchecked", action="store_true", help="skip the entry thresholds")
    p.add_argument("--out")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("oracle", help="exact brute-force quantities")
    graph_input(p)
    p.add_argument("what", nargs="?", choices=("report", "fvs", "packing"), default="report")
    p.add_argument("--congestion", type=int, default=1)
    p.add_argument("--distinct", action="store_true", help="packings may not repeat a cycle")
    p.add_argument("--cap", type=int, default=FVS_CAP, help="vertex cap for the fvs search")
    p.add_argument("--cycle-cap", type=int, default=CYCLE_CAP)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("witness", help="build or check a structural certificate")
    graph_input(p)
    p.add_argument("--kind", required=True,
                   choices=("separation", "well-linked", "grid", "linkage-pair"))
    p.add_argument("--W", help="comma-separated vertex set")
    p.add_argument("--w", type=int, help="separation order bound")
    p.add_argument("--witness", help="JSON witness body (grid or linkage-pair)")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="verify a certificate against a graph")
    graph_input(p)
    p.add_argument("cert", help="certificate JSON")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if args.command == "partition" and args.h is not None and args.d is None:
        parser.print_usage(sys.stderr)
        print("cyclepack partition: --h needs --d", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except (UsageError, BadSpec, UnknownKind) as exc:
        print(f"cyclepack {args.command}: {exc}", file=sys.stderr)
        return USAGE
    except CapExceeded as exc:
        print(f"cyclepack {args.command}: {exc} (raise --cap)", file=sys.stderr)
        return FAILED
    except CyclePackError as exc:
        print(f"cyclepack {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
