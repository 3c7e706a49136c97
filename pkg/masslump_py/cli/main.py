"""Command-line entry point ``masslump``."""

import argparse
import asyncio
import logging
import sys
from collections.abc import Callable, Sequence
from typing import Any

import numpy as np

from ..exceptions.errors import IO_EXIT_CODE, MassLumpError, NoRootError, ValidationError
from ..experiments.async_runner import AsyncExperimentRunner
from ..experiments.presets import PresetKind, get_example, get_preset
from ..experiments.runners import run_convergence_1d, run_fem
from ..fem.mesh import MeshLike, MeshSpec, load_mesh
from ..fourier.dispersion import (
    node_threshold,
    pe_asymptotics,
    sample_curves,
    smallest_positive_root,
    threshold,
    z0_sweep,
)
from ..fourier.symbols import (
    consistent_symbol,
    corrected_symbol,
    exact_symbol,
    harmonic_rel_error,
    lumped_symbol,
)
from ..models.analysis import GapKind, ThresholdKind
from ..models.config import (
    ConvergenceConfig,
    CurvesConfig,
    FemRunConfig,
    OutputFormat,
    PeConfig,
    RootsConfig,
    RunConfig,
    SymbolsConfig,
    build_run_config,
    load_config_file,
)
from ..models.params import SchemeParams, SymbolValue
from ..models.reports import ErrorReport
from ..models.schemes import SchemeSelector
from . import output

logger = logging.getLogger(__name__)

ROOT_CORRECTIONS = 4


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="count", help="More log output (repeatable)")
    common.add_argument("--config", help="Flat key=value file; flags override its values")
    common.add_argument("--out", help="Output path, '-' for stdout (default)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], help="Table format")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation.

    Defaults are left to the configuration models, so only flags given on the
    command line appear in the parsed namespace.
    """
    parser = argparse.ArgumentParser(
        prog="masslump",
        description="Neumann-corrected mass lumping: symbols, gap curves, roots and convergence tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_common_options()]

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(
            name, help=help_text, parents=common, argument_default=argparse.SUPPRESS
        )

    p = command("symbols", "Fourier symbols and harmonic errors of every scheme")
    p.add_argument("--lambda", dest="lambda", type=float, help="Convection speed")
    p.add_argument("--kappa", type=float, help="Diffusion coefficient")
    p.add_argument("--h", type=float, help="Mesh size")
    p.add_argument("--p", type=float, help="Wave number")
    p.add_argument("--n", type=int, help="Highest correction count")
    p.add_argument("--t", type=float, help="Time for the relative harmonic errors")

    p = command("curves", "Sample the gap functions, or z0 against mu")
    p.add_argument("--mu", type=float, help="lambda/(kappa*p)")
    p.add_argument("--pure", action="store_true", help="Pure-transport gap functions")
    p.add_argument("--fig4", action="store_true", help="Sweep z0 over --mu-range")
    p.add_argument("--mu-range", dest="mu_range", help="a:b:count")
    p.add_argument("--nmax", type=int, help="Highest correction count")
    p.add_argument("--zmax", type=float, help="Right end of the z grid")
    p.add_argument("--samples", type=int, help="Number of z samples")
    p.add_argument("--svg", help="Also draw the curves as SVG polylines")

    p = command("roots", "Thresholds, gap-function roots and node-count bounds")
    p.add_argument("--lambda", dest="lambda", type=float, help="Convection speed")
    p.add_argument("--kappa", type=float, help="Diffusion coefficient")
    p.add_argument("--p", type=float, help="Wave number")
    p.add_argument("--length", type=float, help="Domain length for node thresholds")

    p = command("convergence", "1D grid convergence table")
    p.add_argument("--example", help="example1, example1-pure or example2")
    p.add_argument("--preset", help="table1 to table4")
    p.add_argument("--ns", help="Comma-separated node counts")
    p.add_argument("--schemes", help="Comma-separated labels: L, 1, 2, ..., G")
    p.add_argument("--mode", choices=["symbol", "time-stepped"], help="Error evaluation")
    p.add_argument("--t", type=float, help="Evaluation time")
    p.add_argument("--tau", type=float, help="Upper bound on the RK4 step")
    p.add_argument("--jobs", type=int, help="Columns computed concurrently")

    p = command("femrun", "Error report of a FEM run on a simplicial mesh")
    p.add_argument("--example", help="example3 to example7")
    p.add_argument("--preset", help="table5 to table9")
    p.add_argument("--mesh-file", dest="mesh_file", help="Mesh file")
    p.add_argument("--mesh", help="structured:NX,NY[,NZ] or perturbed:NX,NY[,NZ]:AMP:SEED")
    p.add_argument("--corrections", help="Comma-separated correction counts")
    p.add_argument("--lumped", action="store_true", help="Also run the lumped scheme")
    p.add_argument("--no-consistent", dest="consistent", action="store_false", help="Skip the consistent scheme")
    p.add_argument("--tau", type=float, help="Upper bound on the RK4 step")
    p.add_argument("--t-end", dest="t_end", type=float, help="Final time")
    p.add_argument("--seed", type=int, help="Seed of a perturbed mesh recipe")
    p.add_argument("--jobs", type=int, help="Meshes computed concurrently")

    p = command("pe", "Asymptotics of z0, z~ and psi for growing Peclet numbers")
    p.add_argument("--p", type=float, help="Wave number")
    p.add_argument("--pe", help="Comma-separated Peclet numbers")
    return parser


def configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


# --------------------------------------------------------------------------- #
# commands


def cmd_symbols(config: RunConfig) -> str:
    """Symbols ``omega`` of every scheme and, with ``t``, their relative errors."""
    params_cfg = config.params
    assert isinstance(params_cfg, SymbolsConfig)
    params = SchemeParams(lam=params_cfg.lam, kappa=params_cfg.kappa, h=params_cfg.h, p=params_cfg.p)
    exact = exact_symbol(params)
    symbols: list[tuple[str, SymbolValue]] = [
        ("L", lumped_symbol(params)),
        *((str(n), corrected_symbol(n, params)) for n in range(1, params_cfg.n + 1)),
        ("G", consistent_symbol(params)),
    ]
    items: list[tuple[str, Any]] = [("omega_exact", exact.to_complex())]
    items += [(f"omega_{label}", value.to_complex()) for label, value in symbols]
    if params_cfg.t is not None:
        items += [
            (f"rel_err_{label}", harmonic_rel_error(value, exact, params_cfg.t))
            for label, value in symbols
        ]
    return output.key_value_lines(items)


def _columns_table(columns: dict[str, np.ndarray], fmt: OutputFormat) -> str:
    if fmt is OutputFormat.CSV:
        return output.columns_csv(columns)
    names = list(columns)
    rows = [[output.format_compact(float(columns[n][k])) for n in names] for k in range(len(columns[names[0]]))]
    return output.markdown_table(names, rows)


def cmd_curves(config: RunConfig) -> str:
    """Gap-function samples, or the ``z0(mu)`` curve with ``--fig4``."""
    cfg = config.params
    assert isinstance(cfg, CurvesConfig)
    if cfg.fig4:
        assert cfg.mu_range is not None
        lo, hi, count = cfg.mu_range
        mu = np.linspace(lo, hi, count)
        columns = {"mu": mu, "z0": z0_sweep(mu)}
        x_name = "mu"
    else:
        columns = sample_curves(cfg.mu, cfg.nmax, cfg.zmax, cfg.samples, pure=cfg.pure)
        x_name = "z"
    if cfg.svg:
        output.emit(output.svg_polylines(columns, x=x_name), cfg.svg)
    return _columns_table(columns, config.format)


def cmd_roots(config: RunConfig) -> str:
    """Thresholds, smallest roots of ``f_n``/``g_n`` and node-count bounds."""
    cfg = config.params
    assert isinstance(cfg, RootsConfig)
    mu = cfg.lam / (cfg.kappa * cfg.p)
    items: list[tuple[str, Any]] = [
        ("mu", mu),
        ("z0", threshold(ThresholdKind.Z0, mu)),
        ("z_star", threshold(ThresholdKind.Z_STAR, mu)),
        ("psi", threshold(ThresholdKind.PSI, mu)),
    ]
    roots: list[tuple[str, float]] = []
    for kind, prefix in ((GapKind.F, "f"), (GapKind.G, "g")):
        for n in range(1, ROOT_CORRECTIONS + 1):
            try:
                roots.append((f"{prefix}_{n}", smallest_positive_root(kind, n, mu).root))
            except NoRootError:
                logger.info("%s_%d has no sign change on (0, pi]", prefix, n)
    z_tilde = dict(roots).get("f_1")
    if z_tilde is not None:
        items.append(("z_tilde", z_tilde))
    items += [(f"root_{name}", root) for name, root in roots]
    if cfg.length is not None:
        items += [(f"nodes_{name}", node_threshold(root, cfg.length, cfg.p)) for name, root in roots]
    return output.key_value_lines(items)


def cmd_convergence(config: RunConfig) -> str:
    """Convergence table of a 1D example or a table preset."""
    cfg = config.params
    assert isinstance(cfg, ConvergenceConfig)
    if cfg.preset is not None:
        preset = get_preset(cfg.preset)
        if preset.kind is not PresetKind.CONVERGENCE:
            raise ValidationError(f"{cfg.preset} is a FEM preset; use femrun")
        example, ns, schemes = preset.solution, list(preset.ns), preset.selectors()
    else:
        assert cfg.example is not None
        example, ns, schemes = get_example(cfg.example), cfg.ns, []
    if cfg.schemes:
        schemes = _parse_schemes(cfg.schemes)
    if cfg.jobs > 1:

        async def run() -> Any:
            async with AsyncExperimentRunner(cfg.jobs) as runner:
                return await runner.run_convergence_1d(
                    example, ns, schemes or None, cfg.mode, cfg.t, tau=cfg.tau
                )

        table = asyncio.run(run())
    else:
        table = run_convergence_1d(example, ns, schemes or None, cfg.mode, cfg.t, tau=cfg.tau)
    if config.format is OutputFormat.MARKDOWN:
        return output.convergence_markdown(table)
    return output.convergence_csv(table)


def _parse_schemes(labels: Sequence[str]) -> list[SchemeSelector]:
    try:
        return [SchemeSelector.parse(label) for label in labels]
    except ValueError as e:
        raise ValidationError(f"Invalid scheme list: {e}") from e


def _fem_meshes(cfg: FemRunConfig) -> list[tuple[str, MeshLike]]:
    if cfg.mesh_file is not None:
        return [(cfg.mesh_file, load_mesh(cfg.mesh_file))]
    assert cfg.mesh is not None
    spec = MeshSpec.parse(cfg.mesh)
    if cfg.seed is not None and spec.amplitude > 0.0:
        spec = spec.model_copy(update={"seed": cfg.seed})
    return [(str(spec), spec.build())]


def cmd_femrun(config: RunConfig) -> str:
    """Errors of every scheme on one mesh, or on the meshes of a table preset."""
    cfg = config.params
    assert isinstance(cfg, FemRunConfig)
    if cfg.preset is not None:
        preset = get_preset(cfg.preset)
        if preset.kind is not PresetKind.FEM:
            raise ValidationError(f"{cfg.preset} is a convergence preset; use convergence")
        example = preset.solution
        schemes = preset.selectors()
        specs = preset.mesh_specs()
        if cfg.seed is not None:
            specs = [s.model_copy(update={"seed": cfg.seed}) if s.amplitude > 0.0 else s for s in specs]
        meshes: list[tuple[str, MeshLike]] = [(str(s), s.build()) for s in specs]
    else:
        assert cfg.example is not None
        example = get_example(cfg.example)
        schemes = [SchemeSelector.corrected(n) for n in cfg.corrections]
        if cfg.consistent:
            schemes.append(SchemeSelector.consistent())
        meshes = _fem_meshes(cfg)
    if cfg.lumped:
        schemes.insert(0, SchemeSelector.lumped())

    if cfg.jobs > 1:

        async def run() -> list[list[ErrorReport]]:
            async with AsyncExperimentRunner(cfg.jobs) as runner:
                return await runner.run_fem(example, [m for _, m in meshes], schemes, cfg.tau, cfg.t_end)

        reports = asyncio.run(run())
    else:
        reports = [run_fem(example, mesh, schemes, cfg.tau, cfg.t_end) for _, mesh in meshes]
    columns = [(label, column) for (label, _), column in zip(meshes, reports)]
    if config.format is OutputFormat.MARKDOWN:
        t = example.t_end if cfg.t_end is None else cfg.t_end
        return output.fem_markdown(example.name, t, columns)
    return output.fem_csv(columns)


def cmd_pe(config: RunConfig) -> str:
    """Péclet asymptotics of the thresholds."""
    cfg = config.params
    assert isinstance(cfg, PeConfig)
    return output.pe_table(pe_asymptotics(cfg.p, cfg.pe), config.format)


COMMANDS: dict[str, Callable[[RunConfig], str]] = {
    "symbols": cmd_symbols,
    "curves": cmd_curves,
    "roots": cmd_roots,
    "convergence": cmd_convergence,
    "femrun": cmd_femrun,
    "pe": cmd_pe,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return the process exit status."""
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)
    try:
        file_values = load_config_file(config_path) if config_path else {}
        config = build_run_config(command, file_values, args)
        configure_logging(config.verbose)
        text = COMMANDS[command](config)
        output.emit(text, config.out)
    except MassLumpError as e:
        print(f"masslump: error: {e.message}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"masslump: error: {e}", file=sys.stderr)
        return IO_EXIT_CODE
    return 0


if __name__ == "__main__":
    sys.exit(main())
