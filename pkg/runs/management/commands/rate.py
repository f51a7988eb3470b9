from analysis.models import SweepAxis
from runs.commands import CapacityCommand
from runs.utils import parse_floats
from simulation.montecarlo import estimate_frozen_rate_cdf, estimate_rate_stats, sweep_power_inflation

MODES = ('cdf', 'loss-sweep', 'beta-sweep')

COLUMNS = {
    'cdf': ('x', 'analytic', 'mc_alpha_hat', 'mc_alpha_hat_std_error', 'mc_alpha', 'mc_alpha_std_error'),
    'loss-sweep': ('axis', 'value', 'mean_percent_loss', 'mean_percent_loss_std_error', 'mean_rate',
                   'mean_rate_std_error', 'p_low_interference', 'discarded_fraction'),
    'beta-sweep': ('beta', 'mean_rate', 'mean_rate_std_error', 'p_low_interference',
                   'p_low_interference_std_error'),
}

DEFAULT_SWEEP = {
    SweepAxis.GAMMA: '2.5,3,3.5,4',
    SweepAxis.SIGMA: '4,6,8,10,12',
    SweepAxis.RC_OVER_RP: '0.05,0.1,0.2,0.3',
}


class Command(CapacityCommand):
    help = (
        "CR rate given a<1, in bits per channel use. "
        "cdf (fixed link gains of one frozen drop set; analytic curve uses alpha_hat): "
        + ", ".join(COLUMNS['cdf']) + ". "
        "loss-sweep (A_p and A_c recalibrated per point): " + ", ".join(COLUMNS['loss-sweep']) + ". "
        "beta-sweep (P_c scaled by beta, constants kept): " + ", ".join(COLUMNS['beta-sweep']) + "."
    )

    def add_command_arguments(self, parser):
        parser.add_argument('--mode', choices=MODES, default='cdf')
        parser.add_argument('--grid', help="Comma separated rates (cdf; default 20 points up to a high-fading rate).")
        parser.add_argument('--drop-set', dest='drop_set', type=int, default=0, help="Frozen drop set (cdf).")
        parser.add_argument('--axis', choices=SweepAxis.values, default=SweepAxis.GAMMA,
                            help="Swept quantity (loss-sweep).")
        parser.add_argument('--values', help="Comma separated sweep values (loss-sweep).")
        parser.add_argument('--betas', default='1,2,4,8', help="Power inflation factors (beta-sweep).")

    def run(self, context):
        mode = context.options['mode']
        self.columns = COLUMNS[mode]
        return getattr(self, 'run_' + mode.replace('-', '_'))(context)

    def run_cdf(self, context):
        cfg = context.calibrated(context.scenario)
        grid = parse_floats(context.options['grid'], 'grid') if context.options.get('grid') else None
        curve = estimate_frozen_rate_cdf(cfg, context.drops, grid, index=context.options['drop_set'],
                                         workers=context.workers, block_size=context.block_size)
        return [
            (x, curve.analytic[i], curve.mc_hat[i], curve.mc_hat_std_error[i],
             curve.mc_exact[i], curve.mc_exact_std_error[i])
            for i, x in enumerate(curve.grid)
        ]

    def run_loss_sweep(self, context):
        axis = context.options['axis']
        values = parse_floats(context.options.get('values') or DEFAULT_SWEEP[axis], 'values')
        rows = []
        for value in values:
            cfg = context.calibrated(context.scenario.along(axis, value), label=f"{axis}={value!r}")
            result = estimate_rate_stats(cfg, context.drops, workers=context.workers,
                                         block_size=context.block_size)
            rows.append((axis, value, result.mean_percent_loss.value, result.mean_percent_loss.std_error,
                         result.mean_rate.value, result.mean_rate.std_error,
                         result.p_low_interference.value, result.discarded_fraction))
        return rows

    def run_beta_sweep(self, context):
        cfg = context.calibrated(context.scenario)
        betas = parse_floats(context.options['betas'], 'betas')
        return [
            (point.beta, point.mean_rate.value, point.mean_rate.std_error,
             point.p_low_interference.value, point.p_low_interference.std_error)
            for point in sweep_power_inflation(cfg, betas, context.drops, workers=context.workers,
                                               block_size=context.block_size)
        ]
