import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent

# ── Environment ───────────────────────────────────────────────────────────────
ENV = os.getenv("CR_CAPACITY_ENV", "development")
IS_PROD = ENV == "production"

# ── Core ──────────────────────────────────────────────────────────────────────
SECRET_KEY = os.getenv("SECRET_KEY", "cr-capacity-offline-tool")
DEBUG = not IS_PROD
ALLOWED_HOSTS = []
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# ── Installed Apps ────────────────────────────────────────────────────────────
INSTALLED_APPS = [
    # Third party
    "rest_framework",

    # Local apps
    "analysis",
    "simulation",
    "runs",
]

# ── Simulation ────────────────────────────────────────────────────────────────
CR_CAPACITY = {
    "DEFAULT_SEED": int(os.getenv("CR_CAPACITY_SEED", "20090601")),
    "WORKERS": int(os.getenv("CR_CAPACITY_WORKERS", "1")),
    "BLOCK_SIZE": int(os.getenv("CR_CAPACITY_BLOCK_SIZE", "65536")),
    "CALIBRATION_DROPS": int(os.getenv("CR_CAPACITY_CALIBRATION_DROPS", "200000")),
}

# ── Logging ───────────────────────────────────────────────────────────────────
LOG_LEVEL = os.getenv("CR_CAPACITY_LOG_LEVEL", "INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "analysis": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "simulation": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "runs": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
    },
}

# ── Internationalisation ──────────────────────────────────────────────────────
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True
