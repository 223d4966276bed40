import argparse
import logging
import sys

import pandas as pd

from subkern import PipelineConfig, run_pipeline

parser = argparse.ArgumentParser(description='Runs the synthetic clustering experiments and prints a results table.')
parser.add_argument("-o", "--output", action='store', dest='output', help="Writes the table to the specified CSV file",
                    default=None)
parser.add_argument("--skip-four-functions", action='store_true', dest='skip_four_functions',
                    help="Skips the slow four-function experiments")
parser.add_argument("--progress", action='store_true', help="Shows solver progress bars")
parser.add_argument("-v", "--verbose", action='count', default=0)
args = parser.parse_args()

logging.basicConfig(level=max(logging.WARNING - 10 * args.verbose, logging.DEBUG))

# name, configuration, minimum accuracy, expected number of components
experiments = [
    ('two_moons', PipelineConfig(dataset='two_moons', dataset_params=dict(n_per_moon=500, noise_sd=0.08, seed=7),
                                 q='off'), 0.98, 2),
    ('two_moons_nystrom', PipelineConfig(dataset='two_moons',
                                         dataset_params=dict(n_per_moon=500, noise_sd=0.08, seed=7),
                                         q=1000 // 3), 0.95, 2),
    ('three_rings', PipelineConfig(dataset='three_rings', dataset_params=dict(n_per_ring=650), q='off'), 0.95, 3),
]
if not args.skip_four_functions:
    experiments += [
        ('four_functions', PipelineConfig(dataset='four_functions', q='off'), 0.90, 4),
        ('four_functions_nystrom', PipelineConfig(dataset='four_functions', q=1300 // 3), 0.90, 4),
    ]

rows = []
for name, cfg, min_acc, expected_components in experiments:
    cfg.progress = args.progress
    report = run_pipeline(cfg)
    rows.append(dict(
        experiment=name,
        n=report.n_points,
        q=report.q,
        acc=report.metrics.acc,
        nmi=report.metrics.nmi,
        purity=report.metrics.purity,
        components=report.components,
        iterations=report.iterations,
        converged=report.converged,
        wall_time=round(report.wall_time, 2),
        passed=report.metrics.acc >= min_acc and report.components == expected_components,
    ))

df = pd.DataFrame(rows)
print(df.to_string(index=False))
if args.output is not None:
    df.to_csv(args.output, index=False)

failed = df.loc[~df['passed'], 'experiment'].tolist()
if failed:
    sys.exit(f'Failed experiments: {", ".join(failed)}')
