from django.apps import AppConfig


class LSpaceConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'lspace'
