from django.apps import AppConfig


class ConfinementConfig(AppConfig):
    name = 'confinement'
    verbose_name = 'Confined oscillators by imaginary-time propagation'
