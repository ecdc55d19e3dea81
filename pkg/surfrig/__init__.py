"""Surface rigidity toolkit: (2,k)-tight graphs and exact rigidity ranks."""

__version__ = "0.1.0"
