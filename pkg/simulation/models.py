from django.db import models


class Stream(models.IntegerChoices):
    """Independent random-stream families; every block of drops gets its own substream"""
    DROPS = 0, 'Drops'
    CALIBRATION = 1, 'Calibration'
    FROZEN_GAINS = 2, 'Frozen link gains'
    FROZEN_FADING = 3, 'Fading under frozen gains'
    INDEPENDENT_CC = 4, 'Independent CC fading'
