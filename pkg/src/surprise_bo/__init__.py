"""Sequential experiment design with surprise-guided acquisition.

Subpackages cover the full loop: dataset preparation, a Gaussian-process
surrogate, acquisition rules, surprise scoring, the campaign engine, a small
conditional GAN for warm-start augmentation, linear baselines, benchmark
drivers, a CLI, and an HTTP campaign service.
"""

__version__ = "0.1.0"
