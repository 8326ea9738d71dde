"""Cost guards, read from the Django settings at call time."""

from django.conf import settings

from .exceptions import CapExceeded

# enumerating every graph on 9 vertices (2^36 edge sets) is never allowed
ORACLE_HARD_LIMIT = 8


def check_cap(name, value):
    """Raise CapExceeded if `value` is above the setting `name`."""
    limit = getattr(settings, name)
    if value > limit:
        raise CapExceeded(name, limit, value)
    return value


def oracle_max_n():
    """The largest vertex count the brute-force graph scan accepts."""
    if settings.EXCESS_ATLAS_ORACLE_ALLOW_N8:
        return ORACLE_HARD_LIMIT
    return min(settings.EXCESS_ATLAS_ORACLE_MAX_N, ORACLE_HARD_LIMIT - 1)


def check_oracle_n(n):
    """Refuse brute-force scans above the oracle limit."""
    limit = oracle_max_n()
    if n > limit:
        raise CapExceeded('EXCESS_ATLAS_ORACLE_MAX_N', limit, n)
    return n


def default_workers(workers=None):
    """Resolve a worker count, falling back to EXCESS_ATLAS_WORKERS."""
    if workers is None:
        workers = settings.EXCESS_ATLAS_WORKERS
    return max(1, int(workers))
