from django.apps import AppConfig


class SpectrumConfig(AppConfig):
    name = 'spectrum'
