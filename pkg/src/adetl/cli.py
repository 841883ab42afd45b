# adetl/cli.py

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from adetl import __version__
from adetl.charpart import MinimalModel, cylinder_partition, modular_check, partition_combo, theorem_combo, \
    torus_eta, torus_partition
from adetl.decomp import decomposition_labels, insertion_state_report, verify_decomposition
from adetl.dynkin import build, parse_algebra
from adetl.exceptions import AdetlError, ModelError
from adetl.heights import HeightModel
from adetl.logger import get_logger, set_logger_level
from adetl.scalars import model_conductor
from adetl.suites import SUITES, run_suite
from adetl.utils import auto_open

logger = get_logger(__name__)

OPERATORS = ("e", "c", "cdag", "Omega", "Omegainv", "f", "T", "D")
SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    """Validated options shared by the model-based subcommands."""
    algebra: str = None
    mu: int = 1
    a: int = None
    b: int = None
    K: str = None
    Kp: str = "id"
    N: int = 4
    order: int = 12
    backend: str = "exact"
    out: str = None
    format: str = "json"

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        fields = {name: getattr(args, name) for name in cls.__dataclass_fields__ if getattr(args, name, None) is not None}
        config = cls(**fields)
        config.validate()
        return config

    @property
    def boundary(self) -> bool:
        return self.a is not None or self.b is not None

    def validate(self):
        if self.N < 0:
            raise ModelError(f"N must be non-negative, got {self.N}")
        if self.algebra is None:
            return
        parse_algebra(self.algebra)
        g = self.dynkin()
        g.check_mu(self.mu)
        if self.boundary:
            if self.a is None or self.b is None:
                raise ModelError("Fixed boundaries need both --a and --b")
            if self.K is not None:
                raise ModelError("Choose either a fixed boundary (--a, --b) or a periodic twist --K")
            for node in (self.a, self.b):
                if node not in g.nodes:
                    raise ModelError(f"Node {node} is not a node of {g.name} (1..{g.rank})")
        else:
            g.automorphism(self.K or "id")
        if self.Kp:
            g.automorphism(self.Kp)

    def dynkin(self):
        return build(self.algebra, backend=self.backend)

    def model(self) -> HeightModel:
        return HeightModel(self.dynkin(), self.mu)

    def module(self):
        model = self.model()
        if self.boundary:
            return model.boundary(self.a, self.b)
        return model.periodic(self.K or "id")

    def provenance(self, p: int = None, pprime: int = None) -> dict:
        if pprime is None and self.algebra is not None:
            model = self.model()
            p, pprime = model.roots.p, model.pprime
        return {
            "schema": SCHEMA_VERSION,
            "p": p,
            "pprime": pprime,
            "conductor": None if pprime is None else model_conductor(pprime),
            "order": self.order,
            "version": __version__,
        }


###################
# output
###################
def _flatten(record) -> dict:
    if not isinstance(record, dict):
        return {"value": record}
    return {key: value if isinstance(value, (str, int, float, bool)) or value is None
            else json.dumps(value, sort_keys=True, default=str)
            for key, value in record.items()}


def render(config: RunConfig, result, provenance: dict) -> str:
    if config.format == "csv":
        records = result if isinstance(result, list) else [result]
        rows = [_flatten(r) for r in records]
        columns = sorted({key for row in rows for key in row})
        handle = io.StringIO()
        writer = csv.DictWriter(handle, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return handle.getvalue()
    payload = {"provenance": provenance, "result": result}
    return json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"


def emit(config: RunConfig, result, provenance: dict):
    text = render(config, result, provenance)
    if config.out:
        with auto_open(config.out, "wt") as handle:
            handle.write(text)
        logger.info(f"Report written to {config.out}")
    else:
        sys.stdout.write(text)


def _op_entries(op) -> list:
    return [[i, j, str(value)] for i, j, value in sorted(op.entries(), key=lambda t: (t[0], t[1]))]


###################
# handlers
###################
def handle_dynkin(args):
    config = RunConfig.from_args(args)
    g = config.dynkin()
    result = g.to_dict()
    if args.automorphisms:
        result["automorphisms"] = [
            {"name": K.name, "perm": list(K.perm), "order": K.order, "fixed": K.fixed_nodes(),
             "kappa": [str(k) for k in K.kappa]}
            for K in g.automorphisms()
        ]
    if args.fused is not None:
        result["fused_adjacency"] = g.fused_adjacency(args.fused).tolist()
    emit(config, result, config.provenance())


def handle_heights(args):
    config = RunConfig.from_args(args)
    module = config.module()
    N = config.N
    result = {"module": module.label, "N": N, "dim": module.dim(N)}
    if args.basis:
        result["basis"] = [",".join(map(str, path)) for path in module.paths(N)]
    if args.operator:
        name, j = args.operator, args.j
        if name in ("e", "c", "cdag") and j is None:
            raise ModelError(f"--operator {name} needs a position --j")
        if name == "T" and not module.periodic:
            raise ModelError("The single-row transfer matrix T acts on periodic modules; use D")
        if name == "D" and module.periodic:
            raise ModelError("The double-row transfer matrix D acts on fixed-boundary modules; use T")
        if name in ("T", "D"):
            op = module.transfer_matrix(N)
        elif name == "f":
            op = module.generator_op("f", 0, j)
        else:
            op = module.generator_op(name, N, j)
        result["operator"] = {"name": name, "j": j, "shape": list(op.shape), "entries": _op_entries(op)}
    emit(config, result, config.provenance())


def handle_decompose(args):
    config = RunConfig.from_args(args)
    module = config.module()
    report = verify_decomposition(module, config.N, orthogonality=args.orthogonality)
    result = report.to_dict()
    if args.states:
        result["insertion_states"] = [insertion_state_report(module, label)
                                      for label in sorted(decomposition_labels(module), key=lambda lab: (lab.k, str(lab)))
                                      if 2 * label.k <= config.N]
    emit(config, result, config.provenance())
    if not report.passed:
        logger.error(f"Decomposition of {module.label} failed {len(report.failures())} check(s)")
        raise SystemExit(1)


def handle_partition(args):
    config = RunConfig.from_args(args)
    model = config.model()
    if args.torus:
        module = model.periodic(config.K or "id")
        result = {"module": module.label, "Kp": config.Kp}
        if args.continuum:
            combo = partition_combo(module, config.Kp)
            expected = theorem_combo(model.g, model.roots.p, module.K.name, config.Kp)
            result.update({"combination": combo.to_dict(), "closed_form": expected.to_dict(),
                           "eta": torus_eta(module, config.Kp),
                           "agrees": combo == expected})
        else:
            sides = torus_partition(module, args.M1, args.M2, config.N, config.Kp)
            result.update({"N": config.N, "M1": args.M1, "M2": args.M2,
                           "lattice": sides["lattice"], "decomposed": sides["decomposed"],
                           "agrees": sides["lattice"] == sides["decomposed"]})
    else:
        module = config.module()
        if module.periodic:
            raise ModelError("Cylinder partition functions need a fixed boundary (--a, --b)")
        sides = cylinder_partition(module, args.M, config.N, args.L)
        result = {"module": module.label, "L": args.L or "id", "N": config.N, "M": args.M,
                  "lattice": sides["lattice"], "decomposed": sides["decomposed"],
                  "agrees": sides["lattice"] == sides["decomposed"]}
    emit(config, result, config.provenance())


def handle_characters(args):
    config = RunConfig.from_args(args)
    mm = MinimalModel(args.p, args.pp)
    result = mm.to_dict()
    result["characters"] = {f"{r},{s}": str(series) for (r, s), series in mm.character_table(config.order).items()}
    result["modular"] = modular_check(args.p, args.pp)
    if args.s_matrix:
        result["s_matrix"] = [[round(float(v), 12) for v in row] for row in mm.s_matrix()]
    emit(config, result, config.provenance(args.p, args.pp))


def handle_verify(args):
    config = RunConfig.from_args(args)
    model = config.model()
    reports = run_suite(args.suite, model, config.N)
    failed = [r for r in reports if not r.passed]
    result = [r.to_dict() for r in reports]
    if config.format == "csv":
        result = [{"suite": args.suite, **check.to_dict(), "report": r.kind, "model": r.model}
                  for r in reports for check in r.checks]
    emit(config, result, config.provenance())
    if failed:
        logger.error(f"Suite {args.suite}: {len(failed)} of {len(reports)} report(s) failed")
        raise SystemExit(1)


###################
# parser
###################
def _add_model_args(parser, required: bool = True):
    parser.add_argument("--algebra", "--g", dest="algebra", required=required,
                        help="ADE Dynkin diagram, e.g. A3, D4, E6")
    parser.add_argument("--mu", type=int, default=1, help="Exponent index of the eigenvector (default: 1)")


def _add_boundary_args(parser):
    parser.add_argument("--a", type=int, help="Left fixed boundary height")
    parser.add_argument("--b", type=int, help="Right fixed boundary height")
    parser.add_argument("--K", help="Twist of the periodic module (default: id)")


def main(argv=None):
    # Parser for shared options between commands
    shared_args_parser = argparse.ArgumentParser(add_help=False)
    shared_args_parser.add_argument(
        "--log",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Set the logging level [DEBUG | INFO | WARNING | ERROR | CRITICAL]",
    )
    shared_args_parser.add_argument("--backend", choices=["exact", "float"], default="exact",
                                    help="Scalar backend: exact cyclotomic or float (default: exact)")
    shared_args_parser.add_argument("--out", help="Write the report to this file (.gz/.bz2 compress); default stdout")
    shared_args_parser.add_argument("--format", choices=["json", "csv"], default="json",
                                    help="Report format (default: json)")

    parser = argparse.ArgumentParser(
        description="Command Line Interface for adetl-tools",
    )
    parser.add_argument("-v", "--version", action="version",
                        version=f"%(prog)s {__version__}")

    subparsers = parser.add_subparsers(
        title="subcommands", dest="command", required=True)

    # Dynkin subcommand
    dynkin_parser = subparsers.add_parser("dynkin",
                                          parents=[shared_args_parser],
                                          help="Adjacency, exponents and automorphisms of a Dynkin diagram")
    _add_model_args(dynkin_parser)
    dynkin_parser.add_argument("--automorphisms", action="store_true",
                               help="List one automorphism per conjugacy class")
    dynkin_parser.add_argument("--fused", type=int, help="Also print the fused adjacency matrix J_s")
    dynkin_parser.set_defaults(func=handle_dynkin)

    # Heights subcommand
    heights_parser = subparsers.add_parser("heights",
                                           parents=[shared_args_parser],
                                           help="Height modules and the matrices of their generators")
    _add_model_args(heights_parser)
    _add_boundary_args(heights_parser)
    heights_parser.add_argument("--N", type=int, default=4, help="Number of sites (default: 4)")
    heights_parser.add_argument("--operator", choices=OPERATORS,
                                help="Print the matrix of this generator (c and cdag act from/to size N)")
    heights_parser.add_argument("--j", type=int, help="Generator index, or the power of Omega and f")
    heights_parser.add_argument("--basis", action="store_true", help="List the basis paths")
    heights_parser.set_defaults(func=handle_heights)

    # Decompose subcommand
    decompose_parser = subparsers.add_parser("decompose",
                                             parents=[shared_args_parser],
                                             help="Decomposition of a height module into quotient modules")
    _add_model_args(decompose_parser)
    _add_boundary_args(decompose_parser)
    decompose_parser.add_argument("--N", type=int, default=6, help="Largest size to check (default: 6)")
    decompose_parser.add_argument("--states", action="store_true", help="Include the insertion states")
    decompose_parser.add_argument("--no-orthogonality", dest="orthogonality", action="store_false",
                                  help="Skip the orthogonality of the images for the module form (checked by default)")
    decompose_parser.set_defaults(func=handle_decompose)

    # Partition subcommand
    partition_parser = subparsers.add_parser("partition",
                                             parents=[shared_args_parser],
                                             help="Cylinder and torus partition functions")
    _add_model_args(partition_parser)
    _add_boundary_args(partition_parser)
    geometry = partition_parser.add_mutually_exclusive_group(required=True)
    geometry.add_argument("--cylinder", action="store_true", help="Fixed boundaries, double-row transfer matrix")
    geometry.add_argument("--torus", action="store_true", help="Periodic boundaries, single-row transfer matrix")
    partition_parser.add_argument("--Kp", default="id", help="Automorphism inserted in the trace (torus)")
    partition_parser.add_argument("--L", help="Automorphism inserted in the trace (cylinder)")
    partition_parser.add_argument("--N", type=int, default=4, help="Number of sites (default: 4)")
    partition_parser.add_argument("--M", type=int, default=2, help="Number of rows, even (default: 2)")
    partition_parser.add_argument("--M1", type=int, default=0, help="Power of Omega (default: 0)")
    partition_parser.add_argument("--M2", type=int, default=1, help="Power of T (default: 1)")
    partition_parser.add_argument("--continuum", action="store_true",
                                  help="Print the torus partition function as a character combination")
    partition_parser.set_defaults(func=handle_partition)

    # Characters subcommand
    characters_parser = subparsers.add_parser("characters",
                                              parents=[shared_args_parser],
                                              help="Characters and modular data of a minimal model")
    characters_parser.add_argument("--p", type=int, required=True, help="p of M(p, p')")
    characters_parser.add_argument("--pp", type=int, required=True, help="p' of M(p, p')")
    characters_parser.add_argument("--order", type=int, default=12, help="Series order (default: 12)")
    characters_parser.add_argument("--s-matrix", action="store_true", help="Include the modular S matrix")
    characters_parser.set_defaults(func=handle_characters)

    # Verify subcommand
    verify_parser = subparsers.add_parser("verify",
                                          parents=[shared_args_parser],
                                          help="Run a family of exact checks")
    _add_model_args(verify_parser)
    verify_parser.add_argument("--suite", choices=list(SUITES), required=True, help="Check family to run")
    verify_parser.add_argument("--N", type=int, default=4, help="Largest size to check (default: 4)")
    verify_parser.set_defaults(func=handle_verify)

    args = parser.parse_args(argv)
    set_logger_level(args.log)
    try:
        args.func(args)
    except AdetlError as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(2)


if __name__ == "__main__":
    main()
