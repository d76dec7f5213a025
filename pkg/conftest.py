import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "wez_surrogate.test.settings")
django.setup()
