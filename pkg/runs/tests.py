import csv
import io
import json
import tempfile
from pathlib import Path

from django.conf import settings
from django.core.management import call_command, load_command_class
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from runs.serializers import ScenarioConfigSerializer, apply_scenario
from runs.utils import format_cell, render_csv

FAST = dict(settings.CR_CAPACITY, CALIBRATION_DROPS=100_000, BLOCK_SIZE=32_768)


def run(name, **options):
    out = io.StringIO()
    call_command(name, stdout=out, **options)
    return out.getvalue()


def rows(name, **options):
    return list(csv.DictReader(io.StringIO(run(name, **options))))


def floats(records, column):
    return [float(record[column]) for record in records]


class SerializerTests(SimpleTestCase):

    def test_defaults(self):
        serializer = ScenarioConfigSerializer(data={})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        cfg = serializer.to_scenario(7)
        self.assertEqual((cfg.geom.r0, cfg.geom.rc, cfg.geom.rp), (1.0, 100.0, 1000.0))
        self.assertEqual(cfg.seed, 7)
        self.assertFalse(cfg.is_calibrated)

    def test_rician_k_in_db(self):
        serializer = ScenarioConfigSerializer(data=apply_scenario({'k_db': 10.0}, 'ricray'))
        self.assertTrue(serializer.is_valid(), serializer.errors)
        cfg = serializer.to_scenario(1)
        self.assertAlmostEqual(cfg.fading_cp.k_factor, 10.0)
        self.assertFalse(cfg.fading_cc.is_rician)

    def test_errors_name_their_field(self):
        cases = [
            ({'sigma': 8.0}, 'sigma'),
            ({'rc': 0.5}, 'rc'),
            ({'p_c': -1.0}, 'p_c'),
            ({'a_p': 1e9}, 'a_c'),
            ({'calibration_quantile': 1.0}, 'calibration_quantile'),
            ({'fading_cc': 'nakagami'}, 'fading_cc'),
            ({'k_db_pp': 3.0}, 'k_db_pp'),
            ({'fading_cp': 'rician', 'fading_cc': 'rician', 'k_db_cc': 2.0}, 'k_db_cc'),
        ]
        for data, name in cases:
            serializer = ScenarioConfigSerializer(data=data)
            self.assertFalse(serializer.is_valid(), data)
            self.assertIn(name, serializer.errors, data)


class FormattingTests(SimpleTestCase):

    def test_cells(self):
        self.assertEqual(format_cell(0.1), '0.1')
        self.assertEqual(format_cell(float('nan')), 'nan')
        self.assertEqual(format_cell(None), 'nan')
        self.assertEqual(format_cell(True), 'true')
        self.assertEqual(format_cell(3), '3')
        self.assertEqual(float(format_cell(1 / 3)), 1 / 3)

    def test_render(self):
        self.assertEqual(render_csv(('x', 'y'), [(1, 0.5)]), 'x,y\n1,0.5\n')
        with self.assertRaises(ValueError):
            render_csv(('x', 'y'), [(1,)])


@override_settings(CR_CAPACITY=FAST)
class CalibrateCommandTests(SimpleTestCase):

    def test_equal_cell_edge_power(self):
        [record] = rows('calibrate', drops=100_000)
        self.assertAlmostEqual(float(record['a_p_over_a_c']) / 10.0 ** 3.5, 1.0, places=12)
        self.assertEqual(record['include_fading'], 'true')

    def test_deterministic(self):
        self.assertEqual(run('calibrate', drops=100_000), run('calibrate', drops=100_000))

    def test_seed_changes_constants(self):
        self.assertNotEqual(run('calibrate', drops=100_000, seed=1), run('calibrate', drops=100_000, seed=2))

    def test_seed_option_overrides_config(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'config.json'
            path.write_text(json.dumps({'seed': 5}))
            self.assertEqual(run('calibrate', drops=100_000, config=str(path), seed=9),
                             run('calibrate', drops=100_000, seed=9))
            self.assertEqual(run('calibrate', drops=100_000, config=str(path)),
                             run('calibrate', drops=100_000, seed=5))

    def test_too_few_drops(self):
        with self.assertRaises(CommandError) as ctx:
            run('calibrate', drops=1000)
        self.assertEqual(ctx.exception.returncode, 4)
        record = json.loads(str(ctx.exception))
        self.assertEqual(record['error'], 'insufficient_samples')
        self.assertEqual(record['required'], 100_000)

    def test_default_drops_read_at_run_time(self):
        with override_settings(CR_CAPACITY=dict(FAST, CALIBRATION_DROPS=123_456)):
            [record] = rows('calibrate')
            help_text = load_command_class('runs', 'calibrate').create_parser('manage.py', 'calibrate').format_help()
        self.assertEqual(record['drops'], '123456')
        self.assertIn('123456', help_text)


class ConfigErrorTests(SimpleTestCase):

    def assert_configuration_error(self, content, field):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'config.json'
            path.write_text(content)
            with self.assertRaises(CommandError) as ctx:
                run('lowint', config=str(path), values='8')
        self.assertEqual(ctx.exception.returncode, 2)
        record = json.loads(str(ctx.exception))
        self.assertEqual(record['error'], 'configuration')
        self.assertIn(field, record['detail'])

    def test_unknown_field(self):
        self.assert_configuration_error('{"sigmaa": 4}', 'sigmaa')

    def test_bad_geometry(self):
        self.assert_configuration_error('{"r0": 200, "rc": 100}', 'rc')

    def test_malformed_json(self):
        self.assert_configuration_error('{"sigma_db": ', 'config')

    def test_missing_file(self):
        with self.assertRaises(CommandError) as ctx:
            run('lowint', config='/nonexistent/config.json', values='8')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_sweep_values(self):
        with self.assertRaises(CommandError) as ctx:
            run('lowint', values='4,eight')
        self.assertIn('values', json.loads(str(ctx.exception))['detail'])

    def test_nonpositive_drops(self):
        with self.assertRaises(CommandError) as ctx:
            run('lowint', values='8', drops=0)
        self.assertEqual(ctx.exception.returncode, 2)


@override_settings(CR_CAPACITY=FAST)
class LowIntCommandTests(SimpleTestCase):

    def test_shared_cell(self):
        [record] = rows('lowint', axis='rc_over_rp', values='1.0', scenario='rayray')
        self.assertAlmostEqual(float(record['analytic']), 0.5, delta=1e-3)
        self.assertEqual(record['mc'], 'nan')

    def test_more_shadowing_less_low_interference(self):
        analytic = floats(rows('lowint', values='4,8,12', scenario='rayray'), 'analytic')
        self.assertGreater(analytic[0], analytic[1])
        self.assertGreater(analytic[1], analytic[2])

    def test_every_scenario_by_default(self):
        records = rows('lowint', values='8')
        self.assertEqual([record['scenario'] for record in records], ['rayray', 'rayric', 'ricray', 'ricric'])

    def test_monte_carlo_agrees(self):
        [record] = rows('lowint', values='8', scenario='ricric', with_mc=True, drops=400_000)
        gap = abs(float(record['analytic']) - float(record['mc']))
        self.assertLess(gap, 4.0 * float(record['mc_std_error']))

    def test_k_db_reaches_every_scenario(self):
        default = {r['scenario']: float(r['analytic']) for r in rows('lowint', values='8')}
        strong = {r['scenario']: float(r['analytic']) for r in rows('lowint', values='8', k_db=10.0)}
        self.assertEqual(strong['rayray'], default['rayray'])
        self.assertNotEqual(strong['ricric'], default['ricric'])
        self.assertNotEqual(strong['ricray'], default['ricray'])

    def test_worker_count_does_not_change_output(self):
        options = dict(values='8', scenario='rayray', with_mc=True, drops=100_000)
        self.assertEqual(run('lowint', workers=1, **options), run('lowint', workers=2, **options))


@override_settings(CR_CAPACITY=FAST)
class ManifestTests(SimpleTestCase):

    def test_replay_reproduces_output(self):
        with tempfile.TemporaryDirectory() as tmp:
            first = Path(tmp) / 'first.csv'
            second = Path(tmp) / 'second.csv'
            run('rate', mode='beta-sweep', betas='1,2', drops=100_000, seed=11, out=str(first))
            manifest_path = Path(f"{first}.manifest.json")
            manifest = json.loads(manifest_path.read_text())
            self.assertEqual(manifest['command'], 'rate')
            self.assertEqual(manifest['seed'], 11)
            self.assertEqual(manifest['block_size'], FAST['BLOCK_SIZE'])
            self.assertEqual(len(manifest['constants']['calibrated']), 1)

            run('rate', manifest=str(manifest_path), out=str(second), workers=2)
            self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_manifest_of_another_command(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / 'lowint.csv'
            run('lowint', values='8', scenario='rayray', out=str(out))
            with self.assertRaises(CommandError) as ctx:
                run('calibrate', manifest=f"{out}.manifest.json")
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('manifest', json.loads(str(ctx.exception))['detail'])


@override_settings(CR_CAPACITY=FAST)
class AlphaCommandTests(SimpleTestCase):

    def test_cdf_boundaries(self):
        records = rows('alpha', mode='cdf', drops=200_000, drop_sets=2, grid='0,0.5,1')
        self.assertEqual(len(records), 6)
        for record in records:
            if record['x'] == '0.0':
                self.assertEqual(float(record['analytic']), 0.0)
            if record['x'] == '1.0':
                self.assertEqual(float(record['analytic']), 1.0)

    def test_pdf_is_a_density(self):
        records = rows('alpha', mode='pdf', drops=200_000, bins=40, gain_sets=100)
        self.assertEqual(len(records), 40)
        centers = floats(records, 'log10_alpha')
        width = centers[1] - centers[0]
        self.assertAlmostEqual(sum(floats(records, 'density_alpha')) * width, 1.0, delta=1e-6)
        self.assertAlmostEqual(sum(floats(records, 'density_alpha_hat')) * width, 1.0, delta=1e-6)
        self.assertAlmostEqual(sum(floats(records, 'analytic_alpha_hat')) * width, 1.0, delta=0.02)

    def test_mean_sweep_recalibrates(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / 'sweep.csv'
            run('alpha', mode='mean-sweep', values='0.05,0.3', drops=200_000, out=str(out))
            manifest = json.loads(Path(f"{out}.manifest.json").read_text())
            records = list(csv.DictReader(io.StringIO(out.read_text())))
        self.assertEqual(len(manifest['constants']['calibrated']), 2)
        means = floats(records, 'mean_alpha')
        self.assertLess(means[0], means[1])


@override_settings(CR_CAPACITY=FAST)
class RateCommandTests(SimpleTestCase):

    def test_beta_sweep(self):
        records = rows('rate', mode='beta-sweep', betas='1,2,4', drops=200_000)
        rates = floats(records, 'mean_rate')
        self.assertEqual(rates, sorted(rates))
        self.assertEqual(len(set(floats(records, 'p_low_interference'))), 1)

    def test_loss_sweep(self):
        records = rows('rate', mode='loss-sweep', values='2.5,4', drops=200_000)
        losses = floats(records, 'mean_percent_loss')
        self.assertGreaterEqual(losses[0], losses[1])

    def test_cdf(self):
        records = rows('rate', mode='cdf', drops=200_000)
        self.assertEqual(len(records), 20)
        analytic = floats(records, 'analytic')
        self.assertEqual(analytic, sorted(analytic))
        self.assertTrue(all(0.0 <= value <= 1.0 for value in analytic))


class HelpTests(SimpleTestCase):

    def help_text(self, name):
        command = load_command_class('runs', name)
        return command.create_parser('manage.py', name).format_help()

    def test_columns_are_documented(self):
        self.assertIn('a_p_over_a_c', self.help_text('calibrate'))
        self.assertIn('mc_std_error', self.help_text('lowint'))
        self.assertIn('density_alpha_hat', self.help_text('alpha'))
        self.assertIn('analytic_alpha_hat', self.help_text('alpha'))
        self.assertIn('p_low_interference_std_error', self.help_text('rate'))
