"""
Full-duplex self-interference modeling toolkit.

Synthetic SI dataset generation, complex-valued neural Hammerstein models
with partial test-time adaptation, least-squares baselines and the
experiment harness that ties them together.
"""
import logging

__version__ = "1.0.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())
