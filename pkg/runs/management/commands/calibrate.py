from django.conf import settings

from runs.commands import CapacityCommand
from simulation.montecarlo import calibrate_constants


class Command(CapacityCommand):
    help = (
        "Calibrate A_p so the PU link reaches the SNR threshold with the configured "
        "probability, and A_c for equal received power at both cell edges."
    )
    columns = ('a_p', 'a_c', 'a_p_over_a_c', 'drops', 'include_fading')

    def get_default_drops(self):
        return settings.CR_CAPACITY['CALIBRATION_DROPS']

    def add_command_arguments(self, parser):
        parser.add_argument('--exclude-fading', action='store_true',
                            help="Calibrate over placement and shadowing only.")

    def run(self, context):
        calibration = context.serializer.calibration_options()
        if context.options.get('exclude_fading'):
            calibration['include_fading'] = False
        # constants given in the config are ignored; this command always derives them
        a_p, a_c = calibrate_constants(
            context.scenario.replace(a_p=None, a_c=None),
            context.drops,
            workers=context.workers,
            block_size=context.block_size,
            **calibration,
        )
        context.constants.append({'point': 'config', 'a_p': a_p, 'a_c': a_c})
        return [(a_p, a_c, a_p / a_c, context.drops, calibration['include_fading'])]
