"""
Django settings for the chainmail project.

No database, no HTTP surface: the project exists to host the `chainmail`
management command and the test runner.
"""
import os
from dotenv import load_dotenv
from pathlib import Path
from decouple import config, Csv

load_dotenv()

# Build paths
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get('SECRET_KEY', 'django-insecure-chainmail-fallback-key')
DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    # Third party apps
    'rest_framework',

    # Local apps
    'core',
    'graphs',
    'linalg',
    'surgery',
    'lspace',
    'diagrams',
    'cli',
]

DATABASES = {}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework (serializers only)
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}

#   Chainmail computation limits
CHAINMAIL_ORIENTATION_CAP = config('CHAINMAIL_ORIENTATION_CAP', default=20, cast=int)
CHAINMAIL_SPANNING_TREE_EDGE_LIMIT = config('CHAINMAIL_SPANNING_TREE_EDGE_LIMIT', default=24, cast=int)
CHAINMAIL_CERTIFICATE_MAX_NODES = config('CHAINMAIL_CERTIFICATE_MAX_NODES', default=200000, cast=int)

#   Batch runner
CHAINMAIL_DEFAULT_JOBS = config('CHAINMAIL_DEFAULT_JOBS', default=1, cast=int)

#   SVG rendering
CHAINMAIL_SVG_SCALE = config('CHAINMAIL_SVG_SCALE', default=160.0, cast=float)
CHAINMAIL_SVG_STROKE = config('CHAINMAIL_SVG_STROKE', default=3.0, cast=float)
CHAINMAIL_SVG_PALETTE = config(
    'CHAINMAIL_SVG_PALETTE',
    default='#1f77b4,#d62728,#2ca02c,#9467bd,#ff7f0e,#8c564b,#e377c2,#17becf',
    cast=Csv(),
)

# Logging
LOG_LEVEL = config('LOG_LEVEL', default='WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': LOG_LEVEL,
    },
}
