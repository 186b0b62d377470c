from hypothesis import settings

# Exact arithmetic has uneven per-example cost; timing deadlines only add flakes.
settings.register_profile("default", deadline=None)
settings.load_profile("default")
