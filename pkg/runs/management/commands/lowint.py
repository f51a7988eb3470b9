from analysis.fading import RatioScenario, db_to_linear
from analysis.lowint import prob_low_interference
from analysis.models import ScenarioName, SweepAxis
from runs.commands import CapacityCommand
from runs.utils import parse_floats
from simulation.montecarlo import estimate_p_low_interference

DEFAULT_VALUES = {
    SweepAxis.SIGMA: '4,6,8,10,12',
    SweepAxis.RC_OVER_RP: '0.05,0.1,0.2,0.3',
    SweepAxis.GAMMA: '2.5,3,3.5,4',
}


class Command(CapacityCommand):
    help = (
        "P(a<1), the probability of the low interference regime, along a sweep. "
        "Every CP/CC scenario is evaluated unless --scenario picks one; "
        "mc columns are nan without --with-mc."
    )
    columns = ('scenario', 'axis', 'value', 'analytic', 'mc', 'mc_std_error')

    def add_command_arguments(self, parser):
        parser.add_argument('--axis', choices=SweepAxis.values, default=SweepAxis.SIGMA)
        parser.add_argument('--values', help="Comma separated sweep values (axis-dependent default).")
        parser.add_argument('--with-mc', dest='with_mc', action='store_true',
                            help="Add Monte Carlo estimates with binomial standard errors.")

    def run(self, context):
        options = context.options
        axis = options['axis']
        values = parse_floats(options.get('values') or DEFAULT_VALUES[axis], 'values')
        names = [options['scenario']] if options.get('scenario') else ScenarioName.values

        k_factor = db_to_linear(context.serializer.validated_data['k_db'])
        rows = []
        for name in names:
            cp, cc = RatioScenario(name, k_factor).links()
            base = context.scenario.replace(fading_cp=cp, fading_cc=cc)
            for value in values:
                cfg = base.along(axis, value)
                analytic = prob_low_interference(cfg.low_int_config())
                mc = std_error = float('nan')
                if options.get('with_mc'):
                    estimate = estimate_p_low_interference(
                        cfg, context.drops, workers=context.workers, block_size=context.block_size,
                    )
                    mc, std_error = estimate.value, estimate.std_error
                rows.append((name, axis, value, analytic, mc, std_error))
        return rows
