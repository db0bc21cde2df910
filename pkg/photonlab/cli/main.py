r"""
Command-line front end.

    photonlab simulate --preset qd1 --scenario hom --seed 7
    photonlab analyze run/tags.ptag --scenario hbt --preset qd1 --n-pulses 10000000
    photonlab report outputs/*/version_*/report.json

Exit codes: 0 success, 1 usage or configuration error, 2 data error, 3 a required fit did not converge.
"""
import logging
import math
import sys
from argparse import ArgumentParser, Namespace
from typing import Dict, List, Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from photonlab.adapters import TAG_FORMATS, read_tags
from photonlab.analysis.ensemble import ensemble_stats
from photonlab.cli.config import RunConfig, default_config_toml, load_run_config
from photonlab.core.exceptions import BinningError, ConfigError, DomainError, TagFileError, UnsortedTagsError
from photonlab.defaults import DefaultConfig
from photonlab.experiments import ExperimentReport, SuperExperiment, get_experiment_class, get_preset, list_presets
from photonlab.loggers import ReportLogger
from photonlab.utils.functional import concat_dict_values
from photonlab.utils.plotting import EnsembleFigure

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NOT_CONVERGED = 3

DATA_ERRORS = (TagFileError, UnsortedTagsError, DomainError, BinningError, FileNotFoundError)
# metrics of the summary table, in the order of the columns
SUMMARY_METRICS = ("tau_ps", "linewidth_ghz", "g2_raw", "g2_bgc", "v_raw", "v_corr", "prep_fidelity")

console = Console()


class CommandLineParser(ArgumentParser):
    r""" Parser whose errors become `ConfigError`s, so that every usage error leaves with the same exit code. """

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise ConfigError(message)


def _add_run_args(parser: ArgumentParser):
    parser.add_argument('--config', type=str, required=False, default=None, help='TOML, YAML or JSON run config')
    parser.add_argument('--scenario', type=str, required=False, default=None, help='Scenario to run')
    SuperExperiment.add_argparse_args(parser)
    DefaultConfig.add_argparse_args(parser)
    ReportLogger.add_argparse_args(parser)


def build_parser() -> ArgumentParser:
    parser = CommandLineParser(prog="photonlab", description="Simulate and analyze quantum-dot single-photon sources")
    parser.add_argument('--log-level', type=str, required=False, default="WARNING", help='Logging level')
    subparsers = parser.add_subparsers(dest="command")

    simulate = subparsers.add_parser("simulate", help="Simulate a scenario and analyze the simulated data")
    _add_run_args(simulate)
    simulate.add_argument('--emit-tags', action="store_true", help='Also write the simulated time tags')
    simulate.add_argument('--tag-format', type=str, default="ptag", choices=TAG_FORMATS, help='Format of the tags')
    simulate.add_argument('--dump-defaults', action="store_true", help='Print the default configuration and exit')
    simulate.add_argument('--list-presets', action="store_true", help='List the emitter presets and exit')

    analyze = subparsers.add_parser("analyze", help="Analyze recorded time tags")
    analyze.add_argument('tags', type=str, help='Tag file to analyze')
    _add_run_args(analyze)
    analyze.add_argument(
        '--tag-format', type=str, default=None, choices=TAG_FORMATS, help='Format of the tags, from the extension'
    )

    report = subparsers.add_parser("report", help="Summarize several reports")
    report.add_argument('reports', type=str, nargs="*", help='Report files')
    DefaultConfig.add_argparse_args(report)
    ReportLogger.add_argparse_args(report)
    return parser


def _scenario_options(experiment_class, extra: Sequence[str]) -> Dict:
    r""" Parse the arguments left over by the main parser with the scenario's own parser. """
    parser = CommandLineParser(prog=f"photonlab {experiment_class.name}")
    if "add_argparse_args" in vars(experiment_class):
        experiment_class.add_argparse_args(parser)
    options = parser.parse_args(list(extra))
    return {name: value for name, value in vars(options).items() if value is not None}


def _prepare(args: Namespace, extra: Sequence[str]):
    config = load_run_config(
        args.config,
        scenario=args.scenario,
        preset=args.preset,
        seed=args.seed,
        n_pulses=args.n_pulses,
        out=args.output_dir,
        threads=args.threads,
    )
    experiment_class = get_experiment_class(config.scenario)
    options = {**config.options, **_scenario_options(experiment_class, extra)}
    hyperparameters = Namespace(**{
        **options,
        "preset": config.resolve_preset(),
        "detector": config.resolve_detector(experiment_class.default_detector),
        "seed": config.seed,
        "n_pulses": config.n_pulses,
        "threads": config.threads,
    })
    return config, experiment_class(hyperparameters)


def _report_logger(args: Namespace, config_out: str, name: str) -> ReportLogger:
    return ReportLogger(Namespace(output_dir=config_out, name=args.name or name, version=args.version))


def _format(value: Optional[float], error: Optional[float] = None) -> str:
    if value is None:
        return "-"
    if error is None or not math.isfinite(error) or error == 0:
        return f"{value:.4g}"
    return f"{value:.4g} ± {error:.2g}"


def print_report(report: ExperimentReport):
    table = Table(title=f"{report.scenario} ({report.preset or '-'}, seed {report.seed})")
    table.add_column("metric")
    table.add_column("value", justify="right")
    table.add_column("check")
    for name, metric in report.metrics.items():
        check = report.checks.get(name)
        table.add_row(name, _format(metric.value, metric.error), "" if check is None else ("ok" if check else "FAIL"))
    console.print(table)
    if report.flags:
        console.print(f"flags: {', '.join(report.flags)}")


def _finish(report: ExperimentReport, args: Namespace, config: RunConfig, tags=None) -> int:
    report_logger = _report_logger(args, config.out, report.scenario)
    path = report_logger.log_report(report, tags=tags, tag_format=getattr(args, "tag_format", None) or "ptag")
    report_logger.finalize("success")
    print_report(report)
    console.print(f"report: {path}  digest: {report.digest()}")
    if "fit_not_converged" in report.flags:
        logger.error("A required fit did not converge")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_simulate(args: Namespace, extra: Sequence[str]) -> int:
    if args.list_presets:
        table = Table(title="presets")
        table.add_column("name")
        table.add_column("tau (ps)", justify="right")
        table.add_column("F", justify="right")
        table.add_column("sigma_G (GHz)", justify="right")
        for name in list_presets():
            emitter = get_preset(name).emitter
            table.add_row(name, f"{emitter.tau_ps:g}", f"{emitter.prep_fidelity:g}", f"{emitter.sigma_g_ghz:.4g}")
        console.print(table)
        return EXIT_OK
    if args.dump_defaults:
        print(default_config_toml())
        return EXIT_OK

    config, experiment = _prepare(args, extra)
    data = experiment.simulate()
    report = experiment.analyze(data)
    tags = data if args.emit_tags and experiment.uses_tags else None
    if args.emit_tags and not experiment.uses_tags:
        logger.warning("Scenario %s produces no time tags", experiment.name)
    return _finish(report, args, config, tags=tags)


def cmd_analyze(args: Namespace, extra: Sequence[str]) -> int:
    config, experiment = _prepare(args, extra)
    if not experiment.uses_tags:
        raise ConfigError(f"Scenario {experiment.name} does not work on time tags")
    tags = read_tags(args.tags, args.tag_format).validate()
    report = experiment.analyze(tags)
    report.details["tags"] = args.tags
    return _finish(report, args, config)


def summarize(reports: List[ExperimentReport]) -> ExperimentReport:
    r"""
    One row per preset with the metrics of every report of that preset, and the spread of each metric over the
    presets. A single report is returned unchanged.
    """
    if not reports:
        raise ConfigError("No report to summarize")
    if len(reports) == 1:
        return reports[0]

    rows: Dict[str, Dict] = {}
    for report in reports:
        row = rows.setdefault(report.preset or report.scenario, {})
        for name, metric in report.metrics.items():
            row[name] = metric.model_dump()
    summary = ExperimentReport(scenario="summary", seed=0, config=dict(sources=[r.scenario for r in reports]))
    summary.details["rows"] = rows

    columns = concat_dict_values(
        {name: row[name]["value"] for name in SUMMARY_METRICS if name in row and row[name]["value"] is not None}
        for row in rows.values()
    )
    histograms = {}
    for name, values in columns.items():
        if len(values) < 2:
            continue
        stats = ensemble_stats(values)
        summary.add_metric(f"{name}_mean", stats.mean)
        summary.histograms[f"summary_{name}"] = stats
        histograms[name] = stats.to_dict()
    if histograms:
        summary.figures["summary"] = EnsembleFigure(histograms)
    return summary


def cmd_report(args: Namespace, extra: Sequence[str]) -> int:
    if extra:
        raise ConfigError(f"Unrecognized arguments: {' '.join(extra)}")
    reports = [ExperimentReport.load(path) for path in args.reports]
    summary = summarize(reports)

    table = Table(title="summary")
    table.add_column("preset")
    for name in SUMMARY_METRICS:
        table.add_column(name, justify="right")
    for report in reports:
        table.add_row(
            report.preset or report.scenario,
            *(_format(report.metrics[name].value, report.metrics[name].error) if name in report.metrics else "-"
              for name in SUMMARY_METRICS)
        )
    console.print(table)

    report_logger = _report_logger(args, args.output_dir or "outputs", "summary")
    path = report_logger.log_report(summary)
    report_logger.finalize("success")
    console.print(f"summary: {path}")
    return EXIT_OK


COMMANDS = dict(simulate=cmd_simulate, analyze=cmd_analyze, report=cmd_report)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        logging.basicConfig(level=args.log_level.upper(), format="%(message)s", handlers=[RichHandler(console=console)])
        if args.command is None:
            parser.print_usage()
            return EXIT_USAGE
        return COMMANDS[args.command](args, extra)
    except DATA_ERRORS as ex:
        console.print(f"[red]data error:[/red] {ex}")
        return EXIT_DATA
    except (ConfigError, ValueError) as ex:
        console.print(f"[red]error:[/red] {ex}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
