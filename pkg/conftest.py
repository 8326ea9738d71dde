"""Configure Django for pytest, mirroring `manage.py test`."""

import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'settings.ci')
django.setup()
