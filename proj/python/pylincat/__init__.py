from .pylincat import *  # noqa: F401,F403
