"""marketgen: market-generator models and backtest-robustness tooling.

Subpackages by theme:

* :mod:`marketgen.frames`      column-named observation matrices + CSV I/O
* :mod:`marketgen.preprocess`  reversible transforms (minmax, zscore,
  normal score, 16-bit binarization) and price/return helpers
* :mod:`marketgen.datagen`     Gaussian-copula benchmark, AR(1)+EWMA process,
  seeded RNG streams
* :mod:`marketgen.rbm`         Bernoulli / Gaussian / conditional restricted
  Boltzmann machines with CD-k training and exact small-model oracles
* :mod:`marketgen.neuralnet`   dense / 1-D conv layers, manual backprop,
  gradient-norm penalty, RMSProp
* :mod:`marketgen.gan`         minimax GAN, WGAN-GP / weight clipping, CDCWGAN
* :mod:`marketgen.evaluate`    moments, percentiles, correlation, ACF, QQ,
  1-D Wasserstein distance, discrete KL
* :mod:`marketgen.backtest`    risk-parity strategy, bootstrap baseline,
  Monte-Carlo statistic distributions
* :mod:`marketgen.persist`     versioned model documents
* :mod:`marketgen.cli`         batch command-line interface
"""

from .frames import SeriesFrame, frame_from_columns, read_csv, write_csv

__all__ = ["SeriesFrame", "frame_from_columns", "read_csv", "write_csv"]

__version__ = "0.1.0"
