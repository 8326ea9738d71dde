"""Django settings for CI."""

from . import dev as settings
from .dev import *  # noqa: F401, F403

DEBUG = False

# the full 2^28 scan must never run as part of CI
assert not settings.EXCESS_ATLAS_ORACLE_ALLOW_N8
