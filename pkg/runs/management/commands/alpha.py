import numpy as np

from analysis.models import SweepAxis
from runs.commands import CapacityCommand
from runs.utils import parse_floats
from simulation.montecarlo import (
    ANALYTIC_GAIN_SETS,
    FROZEN_DROP_SETS,
    analytic_log_density,
    estimate_alpha_stats,
    estimate_frozen_alpha_cdf,
)

MODES = ('pdf', 'cdf', 'mean-sweep')

COLUMNS = {
    'pdf': ('log10_alpha', 'density_alpha', 'density_alpha_hat', 'analytic_alpha_hat'),
    'cdf': ('drop_set', 'x', 'analytic', 'mc_alpha', 'mc_alpha_hat', 'mc_alpha_hat_std_error'),
    'mean-sweep': ('axis', 'value', 'mean_alpha', 'mean_alpha_std_error', 'mean_alpha_hat',
                   'mean_alpha_hat_std_error', 'n_effective', 'discarded_fraction'),
}

DEFAULT_SWEEP = {
    SweepAxis.RC_OVER_RP: '0.05,0.1,0.2,0.3',
    SweepAxis.GAMMA: '2.5,3,3.5,4',
    SweepAxis.SIGMA: '4,6,8,10,12',
}


class Command(CapacityCommand):
    help = (
        "Statistics of the power loss parameter alpha given a<1. "
        "pdf: " + ", ".join(COLUMNS['pdf']) + ". "
        "cdf (fixed link gains of the first frozen drop sets): " + ", ".join(COLUMNS['cdf']) + ". "
        "mean-sweep (A_p and A_c recalibrated per point): " + ", ".join(COLUMNS['mean-sweep']) + "."
    )

    def add_command_arguments(self, parser):
        parser.add_argument('--mode', choices=MODES, default='pdf')
        parser.add_argument('--bins', type=int, default=60, help="Histogram bins over log10(alpha) (pdf).")
        parser.add_argument('--gain-sets', dest='gain_sets', type=int, default=ANALYTIC_GAIN_SETS,
                            help="Frozen gain sets averaged into analytic_alpha_hat (pdf).")
        parser.add_argument('--grid', help="Comma separated x values in [0, 1] (cdf; default 0, 0.05, ..., 1).")
        parser.add_argument('--drop-sets', dest='drop_sets', type=int, default=FROZEN_DROP_SETS,
                            help="Frozen drop sets (cdf).")
        parser.add_argument('--axis', choices=SweepAxis.values, default=SweepAxis.RC_OVER_RP,
                            help="Swept quantity (mean-sweep).")
        parser.add_argument('--values', help="Comma separated sweep values (mean-sweep).")

    def run(self, context):
        mode = context.options['mode']
        self.columns = COLUMNS[mode]
        return getattr(self, 'run_' + mode.replace('-', '_'))(context)

    def run_pdf(self, context):
        cfg = context.calibrated(context.scenario)
        result = estimate_alpha_stats(cfg, context.drops, bins=context.options['bins'],
                                      workers=context.workers, block_size=context.block_size)
        analytic = analytic_log_density(cfg, result.bin_edges, context.options['gain_sets'])
        return list(zip(result.bin_centers, result.density_exact, result.density_hat, analytic))

    def run_cdf(self, context):
        cfg = context.calibrated(context.scenario)
        grid = (parse_floats(context.options['grid'], 'grid') if context.options.get('grid')
                else np.linspace(0.0, 1.0, 21))
        rows = []
        for curve in estimate_frozen_alpha_cdf(cfg, context.drops, grid, drop_sets=context.options['drop_sets'],
                                               workers=context.workers, block_size=context.block_size):
            for i, x in enumerate(curve.grid):
                rows.append((curve.index, x, curve.analytic[i], curve.mc_exact[i],
                             curve.mc_hat[i], curve.mc_hat_std_error[i]))
        return rows

    def run_mean_sweep(self, context):
        axis = context.options['axis']
        values = parse_floats(context.options.get('values') or DEFAULT_SWEEP[axis], 'values')
        rows = []
        for value in values:
            cfg = context.calibrated(context.scenario.along(axis, value), label=f"{axis}={value!r}")
            result = estimate_alpha_stats(cfg, context.drops, workers=context.workers,
                                          block_size=context.block_size)
            rows.append((axis, value, result.mean_alpha.value, result.mean_alpha.std_error,
                         result.mean_alpha_hat.value, result.mean_alpha_hat.std_error,
                         result.n_effective, result.discarded_fraction))
        return rows
