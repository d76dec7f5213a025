"""
Settings for the wez_surrogate test suite.
"""
import os

SECRET_KEY = "c6u0-9c!7nilj_ysatsda0(f@e_2mws2f!6m0n^o*4#*q#kzp)"

DEBUG = True

INSTALLED_APPS = [
    "wez_surrogate",
]

DATABASES = {}

USE_TZ = True

# Keep designs quick to build in tests
WEZ_SURROGATE = {
    "MAXIMIN_ITERATIONS": 2000,
}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
        },
    },
    "loggers": {
        "wez_surrogate": {
            "handlers": ["console"],
            "level": os.environ.get("WEZ_LOG_LEVEL", "ERROR"),
            "propagate": False,
        },
    },
}
