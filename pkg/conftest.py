import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "cr_capacity.settings")
django.setup()
