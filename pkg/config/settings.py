"""
Django settings for the itp-confine project.

The project has no web surface: Django hosts the `confinement` app, its
management commands (solve, sweep, converge, reproduce) and the
configuration/logging plumbing around them.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
import environ

from confinement.conf import defaults_from_env

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Initialize environment variables
env = environ.Env()

# ITP_CONFINE_CONFIG points to a flat KEY=value file with run defaults.
# Variables already exported in the shell win over the file.
CONFINE_CONFIG_FILE = env.str('ITP_CONFINE_CONFIG', default=str(BASE_DIR / '.env'))
if Path(CONFINE_CONFIG_FILE).is_file():
    environ.Env.read_env(CONFINE_CONFIG_FILE)

DEBUG = env.bool('DEBUG', default=False)


# Application definition

INSTALLED_APPS = [
    'confinement',
]

# Runs are not persisted
DATABASES = {}


# Run defaults (flags on the command line override these)

CONFINE_DEFAULTS = defaults_from_env(env)

# Bundled reference manifests for `reproduce`
CONFINE_REFERENCE_DIR = BASE_DIR / 'confinement' / 'references'


# Logging
# https://docs.djangoproject.com/en/5.2/topics/logging/

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        # StreamHandler writes to stderr, keeping stdout for records
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'confinement': {
            'handlers': ['console'],
            'level': env.str('ITP_LOG_LEVEL', default='WARNING').upper(),
            'propagate': False,
        },
    },
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en'

USE_I18N = True

TIME_ZONE = 'UTC'

USE_TZ = True
