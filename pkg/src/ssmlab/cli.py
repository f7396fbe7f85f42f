import argparse
import logging
import re
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from .autocorr import spectrum_sweep
from .constants import AUTOCORR_SAMPLES, MAGNITUDE_DRAWS, version
from .errors import SsmLabError, ValidationError
from .gram import condition_sweep, tradeoff_sweep
from .initialization import make_bank, make_model, resolve_timescale
from .models.autocov_spec import SYNTHETIC_KINDS
from .models.experiment_config import ExperimentConfig
from .models.init_spec import InitSpec
from .models.recovery_problem import RecoveryProblem
from .models.target_memory import TargetMemory
from .models.task import Task
from .models.timescale_rule import TimescaleRule
from .models.train_config import TrainConfig
from .recovery import dominant_frequencies, greedy_select_nodes, recover_memory
from .serialization import (
    dumps_csv,
    dumps_json,
    dumps_matrix,
    loads_matrix,
    read_text,
    write_text,
)
from .stability import magnitude_sweep
from .trainer import train
from .utils import doubling_range, resolve_seed

logger = logging.getLogger(__name__)

_XI_PATTERN = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*\s*)?pi\s*\*\s*j\s*$")


def parse_floats(text: str) -> List[float]:
    """
    `a..b` is the doubling sequence from `a` up to `b`; anything else is a
    comma-separated list.
    """
    try:
        if ".." in text:
            start, stop = text.split("..", 1)

            return doubling_range(float(start), float(stop))

        return [float(part) for part in text.split(",") if part.strip()]

    except (ValueError, ValidationError) as e:
        raise argparse.ArgumentTypeError(f"invalid list or range: {text!r}") from e


def parse_ints(text: str) -> List[int]:
    values = parse_floats(text)

    if any(value != int(value) for value in values):
        raise argparse.ArgumentTypeError(f"expected integers: {text!r}")

    return [int(value) for value in values]


def parse_kinds(text: str) -> List[str]:
    kinds = [part.strip() for part in text.split(",") if part.strip()]

    for kind in kinds:
        if kind not in SYNTHETIC_KINDS:
            raise argparse.ArgumentTypeError(
                f"unknown kind {kind!r}, expected one of {', '.join(SYNTHETIC_KINDS)}"
            )

    return kinds


def parse_xi(text: str, m: int) -> List[float]:
    """
    Either a comma list or `<scale>*pi*j`, meaning `scale pi j` for `j = 1..m`.
    """
    match = _XI_PATTERN.match(text)

    if match is None:
        return parse_floats(text)

    scale = float(match.group(1)) if match.group(1) else 1.0

    return [scale * np.pi * j for j in range(1, m + 1)]


def _emit(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)

    else:
        write_text(out, text)


def _emit_rows(config: ExperimentConfig, rows: Sequence[Any]):
    if not rows:
        raise ValidationError("The sweep produced no rows")

    if config.format == "json":
        payload = {"rows": [dict(zip(row.columns(), row.values())) for row in rows]}
        text = dumps_json(payload, config.metadata())

    else:
        text = dumps_csv(
            rows[0].columns(),
            [row.values() for row in rows],
            config.metadata(),
        )

    _emit(text, config.out)


def _config(args: argparse.Namespace, command: str, **parameters: Any):
    return ExperimentConfig(
        command=command,
        seed=args.seed,
        out=args.out,
        format=getattr(args, "format", "csv"),
        jobs=args.jobs,
        parameters=parameters,
    )


def _add_timescale_options(command: argparse.ArgumentParser):
    command.add_argument("--alpha", type=float, default=0.5, help="Power-law exponent")
    command.add_argument("--c0", type=float, default=1.0, help="Data-dependent constant")
    command.add_argument(
        "--lambda-max",
        type=float,
        default=1.0,
        help="Top autocorrelation eigenvalue for the data-dependent timescale",
    )


def _derived_timescale(args: argparse.Namespace, L: Optional[int]) -> Optional[float]:
    """
    The power-law or data-dependent timescale, or `None` when the command
    takes its timescale from explicit flags.
    """
    if args.timescale not in ("power-law", "data-dependent"):
        return None

    if L is None:
        raise ValidationError(f"--timescale {args.timescale} needs --L")

    rule = TimescaleRule(mode=args.timescale, alpha=args.alpha, c0=args.c0)

    return resolve_timescale(rule, L, args.lambda_max)


def _timescale_parameters(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "timescale": args.timescale,
        "alpha": args.alpha,
        "c0": args.c0,
        "lambda_max": args.lambda_max,
    }


def cmd_init(args: argparse.Namespace):
    derived = _derived_timescale(args, args.L)
    delta = args.delta if derived is None else derived

    spec = InitSpec(
        scheme=args.scheme,
        m=args.m,
        real_part=args.real_part,
        zero_real_fraction=args.p,
        imag_scale=args.imag_scale,
        seed=args.seed,
    )
    model = make_model(spec, delta)
    config = _config(
        args,
        "init",
        scheme=args.scheme,
        m=args.m,
        p=args.p,
        real_part=args.real_part,
        imag_scale=args.imag_scale,
        delta=delta,
        L=args.L,
        **_timescale_parameters(args),
    )

    _emit(dumps_json(model.to_dict(), config.metadata()), config.out)


def cmd_spectrum(args: argparse.Namespace):
    config = _config(
        args,
        "spectrum",
        kind=args.kind,
        L=args.L,
        samples=args.samples,
        length_scale=args.length_scale,
    )
    rows = spectrum_sweep(
        args.kind,
        args.L,
        args.samples,
        args.seed,
        args.jobs,
        length_scale=args.length_scale,
    )

    _emit_rows(config, rows)


def cmd_stability(args: argparse.Namespace):
    config = _config(
        args,
        "stability",
        kind=args.kind,
        L=args.L,
        alpha=args.alpha,
        re=args.re,
        m=args.m,
        n_c=args.n_c,
        n_x=args.n_x,
        pooled=args.pooled,
        length_scale=args.length_scale,
    )
    rows = magnitude_sweep(
        args.kind,
        args.L,
        args.alpha,
        args.re,
        m=args.m,
        n_c=args.n_c,
        n_x=args.n_x,
        seed=args.seed,
        jobs=args.jobs,
        pooled=args.pooled,
        length_scale=args.length_scale,
    )

    _emit_rows(config, rows)


def cmd_gram(args: argparse.Namespace):
    config = _config(args, "gram", scheme=args.scheme, m=args.m, scale=args.scale)

    _emit_rows(config, condition_sweep(args.scheme, args.m, args.scale, args.jobs))


def cmd_tradeoff(args: argparse.Namespace):
    xi = parse_xi(args.xi, args.m)
    config = _config(args, "tradeoff", xi=xi, ratios=args.ratios, m=args.m)

    _emit_rows(config, tradeoff_sweep(xi, args.ratios, jobs=args.jobs))


def cmd_recover(args: argparse.Namespace):
    _, X = loads_matrix(read_text(args.x))
    _, Y = loads_matrix(read_text(args.y))

    memory = recover_memory(RecoveryProblem(X=X, Y=Y, ridge=args.ridge))
    assert memory.raw is not None

    config = _config(
        args,
        "recover",
        x=args.x,
        y=args.y,
        ridge=args.ridge,
        residual=memory.residual,
    )

    _emit(dumps_matrix(memory.raw, config.metadata()), config.out)


def cmd_pick_nodes(args: argparse.Namespace):
    _, rho = loads_matrix(read_text(args.rho))
    memory = TargetMemory(raw=rho).channel(args.channel)
    L = rho.shape[0]
    k = args.k if args.k is not None else min(L // 2, 4 * args.m)

    dominant = dominant_frequencies(memory, k, args.delta_t)
    nodes, separation = greedy_select_nodes(dominant, args.m)

    config = _config(
        args,
        "pick-nodes",
        rho=args.rho,
        m=args.m,
        k=k,
        delta_t=args.delta_t,
        channel=args.channel,
    )
    payload = {
        "dominant": dominant.tolist(),
        "nodes": nodes.tolist(),
        "separation": separation,
    }

    _emit(dumps_json(payload, config.metadata()), config.out)


def _train_report(args: argparse.Namespace):
    task = Task(
        kind=args.task,
        L=args.L,
        n_train=args.n_train,
        n_test=args.n_test,
        seed=args.seed,
        d=args.d,
        lag=args.lag,
    )
    derived = _derived_timescale(args, args.L)

    if derived is None:
        rule = TimescaleRule(
            delta_min=args.delta_min if args.delta_min is not None else 1 / args.L,
            delta_max=args.delta_max,
        )

    else:
        rule = TimescaleRule(delta_min=derived, delta_max=derived)

    bank = make_bank(
        InitSpec(
            m=args.m,
            real_part=args.re_init,
            zero_real_fraction=args.p,
            seed=args.seed,
        ),
        rule,
        d=args.d,
        L=args.L,
        seed=args.seed,
    )
    config = TrainConfig(
        steps=args.steps,
        lr_state=args.lr_state,
        lr_readout=args.lr_readout,
        batch_size=args.batch,
        eval_every=args.eval_every,
        seed=args.seed,
    )

    return train(bank, task, config)


def cmd_train(args: argparse.Namespace):
    report = _train_report(args)
    config = _config(
        args,
        "train",
        task=args.task,
        L=args.L,
        m=args.m,
        d=args.d,
        re_init=args.re_init,
        p=args.p,
        steps=args.steps,
        batch=args.batch,
        lr_state=args.lr_state,
        lr_readout=args.lr_readout,
        delta_min=args.delta_min,
        delta_max=args.delta_max,
        **_timescale_parameters(args),
    )

    if report.diverged:
        logger.warning("Training diverged at step %s", report.divergence_step)

    _emit(dumps_json(report.to_dict(), config.metadata()), config.out)


def cmd_repro(args: argparse.Namespace):
    """
    Every sweep at desk scale, written into one directory.
    """
    out_dir: Path = args.out or Path(".")
    quick = args.quick
    Ls = doubling_range(64, 1024 if quick else 4096)
    draws = 64 if quick else MAGNITUDE_DRAWS

    def sub(command: str, name: str, extra: List[str]):
        argv = ["--seed", str(args.seed), "--jobs", str(args.jobs), command]
        argv += extra + ["--out", str(out_dir / name)]

        logger.info("repro: %s", " ".join(argv))

        return _dispatch(build_parser().parse_args(argv))

    L_range = f"{Ls[0]}..{Ls[-1]}"

    sub("spectrum", "spectrum.csv", ["--L", L_range])
    sub(
        "stability",
        "mag.csv",
        [
            "--L",
            "64..256" if quick else "64..1024",
            "--alpha",
            "1,0.75,0.5,0.25",
            "--re",
            "0,-0.5",
            "--n-c",
            str(draws),
            "--n-x",
            str(draws),
        ],
    )
    sub("gram", "cond.csv", ["--m", "4,16,64,256"])
    sub("tradeoff", "tradeoff.csv", ["--xi", "0.1*pi*j", "--ratios", "1..256", "--m", "8"])
    sub(
        "train",
        "shift_report.json",
        ["--task", "shift", "--L", "128", "--m", "32", "--re-init", "0"]
        + ["--steps", "300" if quick else "2000"],
    )


COMMANDS: Dict[str, Callable[[argparse.Namespace], None]] = {
    "init": cmd_init,
    "spectrum": cmd_spectrum,
    "stability": cmd_stability,
    "gram": cmd_gram,
    "tradeoff": cmd_tradeoff,
    "recover": cmd_recover,
    "pick-nodes": cmd_pick_nodes,
    "train": cmd_train,
    "repro": cmd_repro,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ssmlab",
        description="Initialization analysis and desk-scale training of diagonal SSMs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {version()}")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for progress, -vv for numerical details",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Global seed; falls back to $SSMLAB_SEED, then 0",
    )
    parser.add_argument("--jobs", type=int, default=1, help="Threads for grid sweeps")

    # Accepted after the subcommand too; SUPPRESS leaves the global value alone.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)

    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str, summary: str, rows: bool = True):
        command = commands.add_parser(name, help=summary, parents=[common])
        command.add_argument("--out", type=Path, default=None, help="Output path (default stdout)")

        if rows:
            command.add_argument("--format", choices=("csv", "json"), default="csv")

        return command

    command = add("init", "Initial model as JSON", rows=False)
    command.add_argument("--scheme", choices=("s4d-lin", "s4d-real"), default="s4d-lin")
    command.add_argument("--m", type=int, default=32)
    command.add_argument("--p", type=float, default=0.0, help="Fraction of zero real parts")
    command.add_argument("--real-part", type=float, default=-0.5)
    command.add_argument("--imag-scale", type=float, default=1.0)
    command.add_argument("--delta", type=float, default=0.01, help="Timescale for --timescale fixed")
    command.add_argument(
        "--timescale",
        choices=("fixed", "power-law", "data-dependent"),
        default="fixed",
    )
    command.add_argument("--L", type=int, default=None, help="Sequence length for derived timescales")
    _add_timescale_options(command)

    command = add("spectrum", "Top eigenvalue of the input autocorrelation")
    command.add_argument("--kind", type=parse_kinds, default=["iid", "ou", "rbf", "rand"])
    command.add_argument("--L", type=parse_ints, default=[64, 128, 256, 512, 1024])
    command.add_argument("--samples", type=int, default=AUTOCORR_SAMPLES)
    command.add_argument("--length-scale", type=float, default=None, help="RBF length-scale")

    command = add("stability", "Expected output magnitude against its bound")
    command.add_argument("--kind", type=parse_kinds, default=["iid"])
    command.add_argument("--L", type=parse_ints, default=[64, 256, 1024])
    command.add_argument("--alpha", type=parse_floats, default=[0.5, 0.75, 1.0])
    command.add_argument("--re", type=parse_floats, default=[0.0, -0.5])
    command.add_argument("--m", type=int, default=4)
    command.add_argument("--n-c", type=int, default=MAGNITUDE_DRAWS)
    command.add_argument("--n-x", type=int, default=MAGNITUDE_DRAWS)
    command.add_argument("--pooled", action="store_true", help="Average y_l^2 over all steps")
    command.add_argument("--length-scale", type=float, default=None, help="RBF length-scale")

    command = add("gram", "Gram matrix conditioning per hidden size")
    command.add_argument("--scheme", choices=("s4d-lin", "s4d-real"), default="s4d-lin")
    command.add_argument("--m", type=parse_ints, default=[4, 16, 64, 256])
    command.add_argument("--scale", type=parse_floats, default=[1.0])

    command = add("tradeoff", "Conditioning against approximation error")
    command.add_argument("--xi", default="0.1*pi*j", help="Comma list or <scale>*pi*j")
    command.add_argument("--ratios", type=parse_floats, default=doubling_range(1, 256))
    command.add_argument("--m", type=int, default=8)

    command = add("recover", "Least-squares recovery of a memory function", rows=False)
    command.add_argument("--x", type=Path, required=True, help="Sequences, N x L")
    command.add_argument("--y", type=Path, required=True, help="Labels, N x C")
    command.add_argument("--ridge", type=float, default=0.0)

    command = add("pick-nodes", "Imaginary parts from dominant frequencies", rows=False)
    command.add_argument("--rho", type=Path, required=True)
    command.add_argument("--m", type=int, default=32)
    command.add_argument("--k", type=int, default=None, help="Dominant frequencies to consider")
    command.add_argument(
        "--delta-t",
        type=float,
        default=1.0,
        help="Sampling step; frequencies are divided by it",
    )
    command.add_argument("--channel", type=int, default=0)

    command = add("train", "Train on a synthetic task", rows=False)
    command.add_argument("--task", choices=("shift", "first-last", "copying"), default="shift")
    command.add_argument("--L", type=int, default=128)
    command.add_argument("--m", type=int, default=32)
    command.add_argument("--d", type=int, default=1)
    command.add_argument("--lag", type=int, default=None)
    command.add_argument("--re-init", type=float, default=-0.5)
    command.add_argument("--p", type=float, default=0.0, help="Fraction of zero real parts")
    command.add_argument("--delta-min", type=float, default=None, help="Default 1/L")
    command.add_argument("--delta-max", type=float, default=0.1)
    command.add_argument(
        "--timescale",
        choices=("uniform", "power-law", "data-dependent"),
        default="uniform",
        help="uniform draws each channel from [delta-min, delta-max]",
    )
    _add_timescale_options(command)
    command.add_argument("--steps", type=int, default=TrainConfig.steps)
    command.add_argument("--batch", type=int, default=TrainConfig.batch_size)
    command.add_argument("--lr-state", type=float, default=TrainConfig.lr_state)
    command.add_argument("--lr-readout", type=float, default=TrainConfig.lr_readout)
    command.add_argument("--eval-every", type=int, default=TrainConfig.eval_every)
    command.add_argument("--n-train", type=int, default=1000)
    command.add_argument("--n-test", type=int, default=1000)

    command = add("repro", "Regenerate every sweep into a directory", rows=False)
    command.add_argument("--quick", action="store_true", help="Smaller grids and budgets")

    return parser


def _dispatch(args: argparse.Namespace):
    args.seed = resolve_seed(args.seed)

    if args.jobs < 1:
        raise ValidationError(f"--jobs must be positive, got {args.jobs}")

    COMMANDS[args.command](args)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs one command and returns its exit status: 0 on success, 1 on a
    numerical or validation error, 2 on a usage error.
    """
    parser = build_parser()

    try:
        args = parser.parse_args(argv)

    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    logging.basicConfig(
        level={0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        _dispatch(args)

    except SsmLabError as e:
        print(f"ssmlab {args.command}: {e}", file=sys.stderr)

        return 1

    return 0


def main():
    sys.exit(run())
