from django.db import models


class FadingName(models.TextChoices):
    """Fast-fading family of a single link"""
    RAYLEIGH = 'rayleigh', 'Rayleigh'
    RICIAN = 'rician', 'Rician'


class ScenarioName(models.TextChoices):
    """CP/CC fading pair, numerator first (|f~|^2 / |c~|^2)"""
    RAYRAY = 'rayray', 'Rayleigh/Rayleigh'
    RAYRIC = 'rayric', 'Rayleigh/Rician'
    RICRAY = 'ricray', 'Rician/Rayleigh'
    RICRIC = 'ricric', 'Rician/Rician'


class SweepAxis(models.TextChoices):
    SIGMA = 'sigma', 'Shadowing sigma (dB)'
    RC_OVER_RP = 'rc_over_rp', 'R_c / R_p'
    GAMMA = 'gamma', 'Path-loss exponent'
