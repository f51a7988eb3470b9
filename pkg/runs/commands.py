"""
Shared plumbing for the capacity management commands: option parsing,
config loading, calibration on demand, CSV output, manifests and the
mapping of library errors onto exit codes.
"""
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from django.utils import timezone
from rest_framework import serializers

import cr_capacity
from analysis.exceptions import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    InsufficientSamplesError,
    UnsupportedConfigurationError,
)
from analysis.models import ScenarioName
from simulation.montecarlo import ScenarioConfig, with_calibrated_constants

from .serializers import ScenarioConfigSerializer, apply_scenario
from .utils import load_json, load_manifest, manifest_path_for, render_csv, render_manifest

logger = logging.getLogger(__name__)

EXIT_CONFIGURATION = 2
EXIT_CONVERGENCE = 3
EXIT_INSUFFICIENT_SAMPLES = 4

DEFAULT_DROPS = 1_000_000

# Options that never change the output and so are not replayed from a manifest
NOT_REPLAYED = {
    'config', 'out', 'manifest', 'workers', 'verbosity', 'settings',
    'pythonpath', 'traceback', 'no_color', 'force_color', 'skip_checks', 'stdout', 'stderr',
}


@dataclass
class RunContext:
    serializer: ScenarioConfigSerializer
    scenario: ScenarioConfig
    options: dict
    seed: int
    drops: int
    workers: int
    block_size: int
    constants: List[dict] = field(default_factory=list)

    def calibrated(self, cfg: ScenarioConfig, label: str = 'config') -> ScenarioConfig:
        """cfg with A_p and A_c, calibrating when the configuration does not fix them."""
        if cfg.is_calibrated:
            return cfg
        cfg = with_calibrated_constants(
            cfg,
            settings.CR_CAPACITY['CALIBRATION_DROPS'],
            workers=self.workers,
            block_size=self.block_size,
            **self.serializer.calibration_options(),
        )
        self.constants.append({'point': label, 'a_p': cfg.a_p, 'a_c': cfg.a_c})
        return cfg


class CapacityCommand(BaseCommand):
    """
    Subclasses set `columns` and implement run(context) returning the CSV
    rows in `columns` order.
    """
    columns: Sequence[str] = ()

    def get_default_drops(self) -> int:
        return DEFAULT_DROPS

    def add_arguments(self, parser):
        parser.add_argument('--config', help="JSON scenario file (flat fields; defaults fill the rest).")
        parser.add_argument('--out', help="CSV destination; stdout when omitted. The manifest goes to <out>.manifest.json.")
        parser.add_argument('--seed', type=int, help="Overrides the config seed and CR_CAPACITY_SEED.")
        parser.add_argument('--drops', type=int, help=f"Monte Carlo drops (default {self.get_default_drops()}).")
        parser.add_argument('--scenario', choices=ScenarioName.values,
                            help="CP/CC fading pair, overriding fading_cp and fading_cc.")
        parser.add_argument('--k-db', dest='k_db', type=float, help="Rician K factor in dB for every Rician link.")
        parser.add_argument('--workers', type=int, help="Worker processes; never changes the output.")
        parser.add_argument('--manifest', help="Re-run from a manifest written by an earlier run.")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        if self.columns:
            parser.epilog = "CSV columns: " + ", ".join(self.columns)
        return parser

    def run(self, context: RunContext) -> List[Sequence]:
        raise NotImplementedError

    def handle(self, *args, **options):
        started_at = timezone.now()
        start = time.perf_counter()
        command = self.command_name
        logger.info("%s started", command)
        try:
            context, config_echo, config_path = self.prepare(options)
            rows = self.run(context)
        except serializers.ValidationError as exc:
            raise self.failure(EXIT_CONFIGURATION, 'configuration', exc.detail)
        except (DomainError, UnsupportedConfigurationError) as exc:
            raise self.failure(EXIT_CONFIGURATION, 'configuration', str(exc))
        except ConvergenceError as exc:
            raise self.failure(EXIT_CONVERGENCE, 'convergence', str(exc),
                               estimate=exc.estimate, error_bound=exc.error_bound)
        except ConsistencyError as exc:
            raise self.failure(EXIT_CONVERGENCE, 'consistency', str(exc))
        except InsufficientSamplesError as exc:
            raise self.failure(EXIT_INSUFFICIENT_SAMPLES, 'insufficient_samples', str(exc),
                               required=exc.required, obtained=exc.obtained)

        output = render_csv(self.columns, rows)
        out = context.options.get('out')
        if out:
            Path(out).write_text(output, encoding='utf-8')
        else:
            self.stdout.write(output, ending='')

        duration = time.perf_counter() - start
        manifest = {
            'command': command,
            'config_path': config_path,
            'config': config_echo,
            'options': {k: v for k, v in context.options.items() if k not in NOT_REPLAYED},
            'seed': context.seed,
            'block_size': context.block_size,
            'version': cr_capacity.__version__,
            'started_at': started_at,
            'duration_seconds': duration,
            'constants': {'calibrated': context.constants},
        }
        manifest_path = manifest_path_for(out)
        if manifest_path:
            manifest_path.write_bytes(render_manifest(manifest))
        logger.info("%s finished in %.2fs (%d rows)", command, duration, len(rows))

    @property
    def command_name(self) -> str:
        return self.__class__.__module__.rsplit('.', 1)[-1]

    def prepare(self, options) -> Tuple[RunContext, dict, Optional[str]]:
        options = dict(options)
        config_path = options.get('config')
        block_size = settings.CR_CAPACITY['BLOCK_SIZE']
        if options.get('manifest'):
            manifest = load_manifest(options['manifest'])
            if manifest['command'] != self.command_name:
                raise serializers.ValidationError(
                    {'manifest': f"Written by '{manifest['command']}', not '{self.command_name}'."}
                )
            replayed = dict(manifest['options'])
            replayed.update(out=options.get('out'), workers=options.get('workers'))
            options.update(replayed)
            raw_config = dict(manifest['config'])
            config_path = manifest['config_path']
            block_size = manifest['block_size']
        elif config_path:
            raw_config = load_json(config_path)
        else:
            raw_config = {}

        raw_config = apply_scenario(raw_config, options.get('scenario'), options.get('k_db'))
        if options.get('seed') is not None:
            raw_config['seed'] = options['seed']
        serializer = ScenarioConfigSerializer(data=raw_config)
        serializer.is_valid(raise_exception=True)

        seed = serializer.validated_data['seed']
        if seed is None:
            seed = settings.CR_CAPACITY['DEFAULT_SEED']
        drops = options.get('drops')
        if drops is None:
            drops = self.get_default_drops()
        if drops < 1:
            raise serializers.ValidationError({'drops': "Must be at least 1."})

        config_echo = dict(serializer.validated_data, seed=seed)
        context = RunContext(
            serializer=serializer,
            scenario=serializer.to_scenario(seed),
            options=options,
            seed=seed,
            drops=drops,
            workers=options.get('workers') or settings.CR_CAPACITY['WORKERS'],
            block_size=block_size,
        )
        return context, config_echo, config_path

    def failure(self, returncode: int, kind: str, detail, **extra) -> CommandError:
        record = {'error': kind, 'detail': detail}
        record.update({k: v for k, v in extra.items() if v is not None})
        logger.error("%s error: %s", kind, detail)
        return CommandError(json.dumps(record, sort_keys=True, default=str), returncode=returncode)
