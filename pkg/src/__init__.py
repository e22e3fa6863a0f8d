__version__ = "0.1.0"

CONVENTIONS_VERSION = "1"
