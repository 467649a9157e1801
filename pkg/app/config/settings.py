"""
Settings for the mehler-traces project.

Only the command layer reads NUMERICS; library functions take explicit
arguments.
"""
import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# The project serves no requests; the key only satisfies Django's checks.
SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY',
    'django-insecure-mehler-traces-command-line-only',
)

DEBUG = bool(int(os.environ.get('DJANGO_DEBUG', 0)))

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'core',
    'kernels',
    'spectrum',
    'traces',
    'bounds',
    'statmech',
    'oracle',
]


# Database
# Nothing is persisted; sweeps are written to CSV/JSON files.

DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/3.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Logging
# https://docs.djangoproject.com/en/3.2/topics/logging/

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.environ.get('MEHLER_TRACES_LOG_LEVEL', 'WARNING'),
    },
}


# Numerical defaults used by the management commands.
# Library functions take these as explicit arguments.

NUMERICS = {
    'TOL': 1e-10,
    'GRID_POINTS': 1024,
    'IMAGE_CUTOFF': None,
    'NOISE_FLOOR_FACTOR': 10.0,
    'L_FLOOR': 4.0,
    'JOBS': int(os.environ.get('MEHLER_TRACES_JOBS', 1)),
}

REST_FRAMEWORK = {
    'COERCE_DECIMAL_TO_STRING': False,
}
