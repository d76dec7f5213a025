from django.apps import AppConfig


class WezSurrogateAppConfig(AppConfig):
    label = "wez_surrogate"
    name = "wez_surrogate"
    verbose_name = "WEZ surrogate"
