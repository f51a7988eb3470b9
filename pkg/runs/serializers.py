from rest_framework import serializers

from analysis.fading import FadingKind, ShadowingParams
from analysis.geometry import Geometry
from analysis.models import FadingName, ScenarioName
from simulation.montecarlo import ScenarioConfig

LINKS = ('pp', 'pc', 'cp', 'cc')

# CP and CC fading for each named scenario
SCENARIO_LINKS = {
    ScenarioName.RAYRAY: (FadingName.RAYLEIGH, FadingName.RAYLEIGH),
    ScenarioName.RAYRIC: (FadingName.RAYLEIGH, FadingName.RICIAN),
    ScenarioName.RICRAY: (FadingName.RICIAN, FadingName.RAYLEIGH),
    ScenarioName.RICRIC: (FadingName.RICIAN, FadingName.RICIAN),
}

POSITIVE_FIELDS = ('r0', 'rc', 'rp', 'gamma', 'p_p', 'p_c', 'n_p', 'n_c')


class ScenarioConfigSerializer(serializers.Serializer):
    """
    Flat JSON scenario: radii in meters, sigma and K in dB, powers and noises
    linear. A Rician link without its own k_db_<link> uses k_db.
    """
    r0 = serializers.FloatField(default=1.0)
    rc = serializers.FloatField(default=100.0)
    rp = serializers.FloatField(default=1000.0)
    gamma = serializers.FloatField(default=3.5)
    sigma_db = serializers.FloatField(default=8.0, min_value=0.0)

    fading_pp = serializers.ChoiceField(choices=FadingName.choices, default=FadingName.RAYLEIGH)
    fading_pc = serializers.ChoiceField(choices=FadingName.choices, default=FadingName.RAYLEIGH)
    fading_cp = serializers.ChoiceField(choices=FadingName.choices, default=FadingName.RAYLEIGH)
    fading_cc = serializers.ChoiceField(choices=FadingName.choices, default=FadingName.RAYLEIGH)
    k_db = serializers.FloatField(default=5.0)
    k_db_pp = serializers.FloatField(required=False, allow_null=True, default=None)
    k_db_pc = serializers.FloatField(required=False, allow_null=True, default=None)
    k_db_cp = serializers.FloatField(required=False, allow_null=True, default=None)
    k_db_cc = serializers.FloatField(required=False, allow_null=True, default=None)

    p_p = serializers.FloatField(default=1.0)
    p_c = serializers.FloatField(default=1.0)
    n_p = serializers.FloatField(default=1.0)
    n_c = serializers.FloatField(default=1.0)
    a_p = serializers.FloatField(required=False, allow_null=True, default=None)
    a_c = serializers.FloatField(required=False, allow_null=True, default=None)

    seed = serializers.IntegerField(required=False, allow_null=True, default=None,
                                    min_value=0, max_value=2 ** 64 - 1)

    calibration_quantile = serializers.FloatField(default=0.95)
    calibration_snr_db = serializers.FloatField(default=5.0)
    calibration_include_fading = serializers.BooleanField(default=True)

    def validate(self, data):
        unknown = sorted(set(self.initial_data) - set(self.fields))
        if unknown:
            raise serializers.ValidationError({name: "Unknown configuration field." for name in unknown})

        errors = {}
        for name in POSITIVE_FIELDS + ('a_p', 'a_c'):
            value = data.get(name)
            if value is not None and not value > 0:
                errors[name] = "Must be positive."
        if errors:
            raise serializers.ValidationError(errors)

        if not data['r0'] < data['rc']:
            errors['rc'] = "Must be larger than r0."
        if not data['r0'] < data['rp']:
            errors['rp'] = "Must be larger than r0."
        if (data['a_p'] is None) != (data['a_c'] is None):
            missing = 'a_c' if data['a_c'] is None else 'a_p'
            errors[missing] = "a_p and a_c must be given together."
        if not 0 < data['calibration_quantile'] < 1:
            errors['calibration_quantile'] = "Must lie strictly between 0 and 1."
        if (data['fading_cp'] == FadingName.RICIAN and data['fading_cc'] == FadingName.RICIAN
                and self._k_db(data, 'cp') != self._k_db(data, 'cc')):
            errors['k_db_cc'] = "Rician CP and CC links must share the same K factor."
        for link in LINKS:
            if data[f'fading_{link}'] == FadingName.RAYLEIGH and data[f'k_db_{link}'] is not None:
                errors[f'k_db_{link}'] = "A Rayleigh link takes no K factor."
        if errors:
            raise serializers.ValidationError(errors)
        return data

    @staticmethod
    def _k_db(data, link):
        value = data.get(f'k_db_{link}')
        return data['k_db'] if value is None else value

    def _fading(self, data, link) -> FadingKind:
        if data[f'fading_{link}'] == FadingName.RICIAN:
            return FadingKind.rician_db(self._k_db(data, link))
        return FadingKind.rayleigh()

    def to_scenario(self, seed: int) -> ScenarioConfig:
        """The validated fields as a ScenarioConfig; dB values are converted here and only here."""
        data = self.validated_data
        return ScenarioConfig(
            geom=Geometry(r0=data['r0'], rc=data['rc'], rp=data['rp']),
            gamma=data['gamma'],
            shadowing=ShadowingParams(sigma_db=data['sigma_db']),
            fading_pp=self._fading(data, 'pp'),
            fading_pc=self._fading(data, 'pc'),
            fading_cp=self._fading(data, 'cp'),
            fading_cc=self._fading(data, 'cc'),
            p_p=data['p_p'],
            p_c=data['p_c'],
            n_p=data['n_p'],
            n_c=data['n_c'],
            a_p=data['a_p'],
            a_c=data['a_c'],
            seed=seed,
        )

    def calibration_options(self) -> dict:
        data = self.validated_data
        return {
            'quantile_prob': data['calibration_quantile'],
            'snr_threshold_db': data['calibration_snr_db'],
            'include_fading': data['calibration_include_fading'],
        }


def apply_scenario(config: dict, scenario: str = None, k_db: float = None) -> dict:
    """Config overridden by the --scenario and --k-db options, before validation."""
    config = dict(config)
    if scenario is not None:
        cp, cc = SCENARIO_LINKS[scenario]
        config.update(fading_cp=cp, fading_cc=cc, k_db_cp=None, k_db_cc=None)
    if k_db is not None:
        config['k_db'] = k_db
    return config


class RunManifestSerializer(serializers.Serializer):
    """Everything needed to re-derive a command's output."""
    command = serializers.CharField()
    config_path = serializers.CharField(allow_null=True, required=False, default=None)
    config = serializers.DictField()
    options = serializers.DictField()
    seed = serializers.IntegerField(min_value=0, max_value=2 ** 64 - 1)
    block_size = serializers.IntegerField(min_value=1)
    version = serializers.CharField()
    started_at = serializers.DateTimeField()
    duration_seconds = serializers.FloatField(min_value=0.0)
    constants = serializers.DictField(required=False, default=dict)
