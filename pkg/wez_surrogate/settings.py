"""
Default settings used by the `wez` console script when no
DJANGO_SETTINGS_MODULE is set.
"""
import os

SECRET_KEY = "wez-surrogate-cli"

DEBUG = False

INSTALLED_APPS = [
    "wez_surrogate",
]

DATABASES = {}

USE_TZ = True

WEZ_SURROGATE = {}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "wez_surrogate": {
            "handlers": ["console"],
            "level": os.environ.get("WEZ_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}
