"""Multi-QoS route optimization on random geometric mesh networks."""

__version__ = "0.1.0"
