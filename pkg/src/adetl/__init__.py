from .dynkin import build
from .heights import HeightModel

__version__ = "0.1.0"
