"""Django settings for development."""

from .base import *  # noqa: F401, F403

SECRET_KEY = 'secret key here'
DEBUG = True
