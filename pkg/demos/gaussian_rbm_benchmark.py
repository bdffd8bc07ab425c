"""Gaussian-Bernoulli RBM as a joint-distribution learner.

Trains a 128-hidden-unit Gaussian RBM on the copula benchmark with CD-1 and
compares marginal statistics and the correlation matrix of Gibbs-sampled
synthetic data against the training sample.  Desk scale (a few minutes);
increase ``EPOCHS`` toward 20000 to reproduce the benchmark tables closely.
"""

import numpy as np

from marketgen import rbm
from marketgen.datagen import RngStream, benchmark_copula_spec, sample_copula
from marketgen.evaluate import corr_matrix, summary

EPOCHS = 1000
GIBBS_STEPS = 1000

frame = sample_copula(benchmark_copula_spec(), 10000, RngStream(1))
print(f"training gaussian RBM (4 visible, 128 hidden, CD-1, {EPOCHS} epochs)...")

model = rbm.init_rbm("gaussian", m=4, n=128, rng=RngStream(2))
config = rbm.TrainConfig(learning_rate=0.01, batch_size=500, epochs=EPOCHS,
                         cd_k=1, seed=3)
trained, trace = rbm.train(model, frame.data, config)
print(f"reconstruction error: {trace[0]:.4f} (first epoch) "
      f"-> {trace[-1]:.4f} (last epoch)")

synthetic = rbm.sample(trained, 10000, GIBBS_STEPS, RngStream(4))

s_train, s_synth = summary(frame), summary(synthetic)
print("\n            training    simulated")
for j, name in enumerate(frame.columns):
    print(f"{name} mean   {s_train.mean[j]:8.3f}   {s_synth.mean[j]:8.3f}")
    print(f"{name} std    {s_train.std[j]:8.3f}   {s_synth.std[j]:8.3f}")
    print(f"{name} p1     {s_train.p1[j]:8.3f}   {s_synth.p1[j]:8.3f}")
    print(f"{name} p99    {s_train.p99[j]:8.3f}   {s_synth.p99[j]:8.3f}")

print("\ntraining correlations:")
print(np.round(corr_matrix(frame), 3))
print("simulated correlations:")
print(np.round(corr_matrix(synthetic), 3))
