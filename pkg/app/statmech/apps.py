from django.apps import AppConfig


class StatmechConfig(AppConfig):
    name = 'statmech'
