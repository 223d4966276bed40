"""
Command line interface with the commands cluster, synth, kernel, eval and sweep. Exit status is 0 on success and 1
on failure, in which case a stage-tagged message is printed to stderr.
"""
import argparse
import json
import logging
logger = logging.getLogger(__name__)
import sys
from pathlib import Path

from .bootstrap import LeastSquaresBootstrap, check_data_matrix
from .datagen import GENERATORS, make_dataset
from .exceptions import ParameterError, PipelineError, SubkernError
from .file import load_labels, save_csv, save_matrix
from .metrics import evaluate
from .pipeline import PipelineConfig, build_kernel, load_input, run_pipeline, stage
from .sweep import Sweep, parameter_grid
from .kernel import validate_kernel

# Flags that map one-to-one onto PipelineConfig fields
CONFIG_FLAGS = ('input', 'dataset', 'label_column', 'bootstrap_gamma', 'xi', 'alpha', 'beta', 'gamma', 'k',
                'max_iters', 'tol', 'q', 'rho', 'n_groups', 'seed', 'output_dir', 'threshold', 'progress')


def _parse_q(value):
    if value in ('auto', 'off'):
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'q must be "auto", "off" or an integer, got {value!r}')


def _parse_rho(value):
    if value == 'adaptive':
        return value
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'rho must be "adaptive" or a number, got {value!r}')


def _parse_param(value):
    """
    Parses KEY=VALUE, interpreting VALUE as JSON where possible.
    """
    key, sep, raw = value.partition('=')
    if not sep or not key:
        raise argparse.ArgumentTypeError(f'Expected KEY=VALUE, got {value!r}')
    try:
        return key, json.loads(raw)
    except json.JSONDecodeError:
        return key, raw


def _add_config_arguments(parser):
    group = parser.add_argument_group('pipeline configuration')
    group.add_argument('--config', help='JSON configuration file; its values override flags')
    source = group.add_mutually_exclusive_group()
    source.add_argument('--input', help='data file (.csv, .txt or .npy) with one point per row')
    source.add_argument('--dataset', choices=sorted(GENERATORS), help='synthetic dataset')
    group.add_argument('--param', dest='dataset_params', type=_parse_param, action='append', metavar='KEY=VALUE',
                       help='keyword argument of the synthetic dataset generator, repeatable')
    group.add_argument('--label-column', action='store_true', default=None,
                       help='the last input column holds integer labels')
    group.add_argument('--bootstrap-gamma', type=float)
    group.add_argument('--xi', type=float)
    group.add_argument('--alpha', type=float)
    group.add_argument('--beta', type=float)
    group.add_argument('--gamma', type=float)
    group.add_argument('-k', type=int, help='number of clusters, defaults to the number of true classes')
    group.add_argument('--max-iters', type=int)
    group.add_argument('--tol', type=float)
    group.add_argument('--q', type=_parse_q, help='Nystroem sample count, "auto" or "off"')
    group.add_argument('--rho', type=_parse_rho, help='Nystroem shift, "adaptive" or a number')
    group.add_argument('--n-groups', type=int)
    group.add_argument('--seed', type=int)
    group.add_argument('--output-dir')
    group.add_argument('--threshold', type=float)
    group.add_argument('--progress', action='store_true', default=None)


def config_from_args(args):
    """
    Builds a PipelineConfig from parsed arguments. Flags that were not given keep the defaults, values of the JSON
    configuration file take precedence over flags.
    """
    data = {name: getattr(args, name) for name in CONFIG_FLAGS if getattr(args, name, None) is not None}
    if getattr(args, 'dataset_params', None):
        data['dataset_params'] = dict(args.dataset_params)
    if getattr(args, 'config', None) is not None:
        with open(args.config, 'r', encoding='utf-8') as file:
            overrides = json.load(file)
        if not isinstance(overrides, dict):
            raise ParameterError('Configuration file must contain a JSON object.')
        if 'input' in overrides or 'dataset' in overrides:
            data.pop('input', None)
            data.pop('dataset', None)
        data.update(overrides)
    return PipelineConfig.from_dict(data)


def _cluster(args):
    with stage('config'):
        cfg = config_from_args(args)
    report = run_pipeline(cfg)
    print(report.to_json())


def _synth(args):
    with stage('synth'):
        params = dict(seed=args.seed)
        params.update(args.dataset_params or [])
        dataset = make_dataset(args.dataset, **params)
        save_csv(dataset.x, args.output, labels=dataset.truth)
    logger.info(f'Wrote {dataset!r} to {args.output}.')


def _kernel(args):
    with stage('config'):
        cfg = config_from_args(args)
        cfg.validate()
    with stage('ingest'):
        _, x, truth = load_input(cfg)
        x = check_data_matrix(x)
        k = cfg.k if cfg.k is not None else (2 if truth is None else truth.k)
    with stage('bootstrap'):
        z_boot = LeastSquaresBootstrap(cfg.bootstrap_gamma).fit(x)
    with stage('kernel'):
        kernel, _ = build_kernel(cfg, x, z_boot, k)
        validation = validate_kernel(kernel)
    with stage('export'):
        save_matrix(kernel.k, args.output)
        report_path = Path(args.output).with_suffix('.validation.json')
        with open(report_path, 'w', encoding='utf-8') as file:
            json.dump(validation.to_dict(), file, indent=2)
    print(json.dumps(validation.to_dict(), indent=2))


def _eval(args):
    with stage('eval'):
        report = evaluate(load_labels(args.truth), load_labels(args.pred))
    print(report.to_json())


def _sweep(args):
    with stage('config'):
        base = config_from_args(args)
        if args.grid is not None:
            with open(args.grid, 'r', encoding='utf-8') as file:
                grid = json.load(file)
        else:
            grid = parameter_grid(args.grid_size)
        sweep = Sweep(base, grid)
    with stage('sweep'):
        df = sweep.execute(multiprocessing=not args.sequential, saveto=args.saveto)
    print(df.to_string(index=False))


def build_parser():
    parser = argparse.ArgumentParser(prog='subkern', description='Subspace clustering with a data-driven kernel.')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='increase log verbosity')
    commands = parser.add_subparsers(dest='command', required=True)

    cluster = commands.add_parser('cluster', help='run the clustering pipeline')
    _add_config_arguments(cluster)
    cluster.set_defaults(func=_cluster)

    synth = commands.add_parser('synth', help='export a synthetic dataset as CSV with a label column')
    synth.add_argument('dataset', choices=sorted(GENERATORS))
    synth.add_argument('output')
    synth.add_argument('--seed', type=int, default=0)
    synth.add_argument('--param', dest='dataset_params', type=_parse_param, action='append', metavar='KEY=VALUE')
    synth.set_defaults(func=_synth)

    kernel = commands.add_parser('kernel', help='export the learned kernel and its validation report')
    _add_config_arguments(kernel)
    kernel.add_argument('output', help='CSV file for the kernel matrix')
    kernel.set_defaults(func=_kernel)

    evaluation = commands.add_parser('eval', help='compare two label files')
    evaluation.add_argument('truth')
    evaluation.add_argument('pred')
    evaluation.set_defaults(func=_eval)

    sweep = commands.add_parser('sweep', help='run the pipeline over a parameter grid')
    _add_config_arguments(sweep)
    sweep.add_argument('--grid', help='JSON file mapping configuration fields to value lists')
    sweep.add_argument('--grid-size', type=int, default=3, help='values per weight of the default grid')
    sweep.add_argument('--saveto', help='CSV file for the results table')
    sweep.add_argument('--sequential', action='store_true', help='run without multiprocessing')
    sweep.set_defaults(func=_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=max(logging.WARNING - 10 * args.verbose, logging.DEBUG),
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        args.func(args)
    except (SubkernError, OSError) as error:
        if not isinstance(error, PipelineError):
            error = PipelineError(args.command, error)
        print(f'error: {error}', file=sys.stderr)
        return 1
    return 0
