"""Django settings for Excess Atlas."""

import os

BASE_DIR = os.path.dirname(os.path.dirname(__file__))
assert os.path.exists(os.path.join(BASE_DIR, 'manage.py'))


def _env_int(name, default):
    """Read an integer cap from the environment."""
    value = os.environ.get(name)
    if value is None or value == '':
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f'{name} must be an integer, got `{value}`')


def _env_flag(name):
    """Read a boolean flag from the environment."""
    return os.environ.get(name, '').lower() in ('1', 'true', 'yes', 'on')


INSTALLED_APPS = [
    'excess_atlas',
]

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

""" Cost guards """

# integer recurrence and asymptotic commands
EXCESS_ATLAS_MAX_N = _env_int('EXCESS_ATLAS_MAX_N', 400)

# brute-force simple graphs; n = 8 scans 2^28 edge sets
EXCESS_ATLAS_ORACLE_MAX_N = _env_int('EXCESS_ATLAS_ORACLE_MAX_N', 7)
EXCESS_ATLAS_ORACLE_ALLOW_N8 = _env_flag('EXCESS_ATLAS_ORACLE_ALLOW_N8')

# brute-force labeled multigraphs
EXCESS_ATLAS_MULTIGRAPH_MAX_N = _env_int('EXCESS_ATLAS_MULTIGRAPH_MAX_N', 4)
EXCESS_ATLAS_MULTIGRAPH_MAX_M = _env_int('EXCESS_ATLAS_MULTIGRAPH_MAX_M', 5)

# generating-function pipeline
EXCESS_ATLAS_MAX_K = _env_int('EXCESS_ATLAS_MAX_K', 16)
EXCESS_ATLAS_MAX_PATCHWORK_EXCESS = _env_int(
    'EXCESS_ATLAS_MAX_PATCHWORK_EXCESS', 3,
)
EXCESS_ATLAS_SERIES_ORDER = _env_int('EXCESS_ATLAS_SERIES_ORDER', 64)
EXCESS_ATLAS_DEFAULT_ORDER = _env_int('EXCESS_ATLAS_DEFAULT_ORDER', 64)

# S-sequence checks
EXCESS_ATLAS_APPENDIX_MAX_K = _env_int('EXCESS_ATLAS_APPENDIX_MAX_K', 200)

EXCESS_ATLAS_WORKERS = _env_int('EXCESS_ATLAS_WORKERS', 1)

""" Logging """

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'excess_atlas': {
            'handlers': ['console'],
            'level': os.environ.get('EXCESS_ATLAS_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
