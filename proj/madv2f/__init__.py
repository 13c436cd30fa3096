from ._dv2f import *  # noqa: F401,F403
from ._dv2f import __doc__  # noqa: F401
