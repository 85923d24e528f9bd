"""Version information for monotone-markov-models."""

__version__ = "0.1.0"
__author__ = "Monotone Markov Models developers"
__email__ = "mmm-dev@users.noreply.github.com"
