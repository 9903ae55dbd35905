"""Draw direction frames from the three samplers and check their two
defining properties: exact column orthogonality on every draw, and
identity second moment on average.
"""

import numpy as np

from ozo.samplers import make_rng, sample_coordinate, sample_hadamard, sample_haar

d, ell = 8, 3
rng = make_rng(0)

for name, fn in (("coordinate", sample_coordinate),
                 ("haar", sample_haar),
                 ("hadamard", sample_hadamard)):
    P = fn(d, ell, rng)
    gram = P.T @ P
    print(f"{name:10s} P^T P deviation from (d/ell) I: "
          f"{np.max(np.abs(gram - (d / ell) * np.eye(ell))):.2e}")

# second moments need many draws; 20k is enough to see the identity emerge
draws = 20_000
acc = np.zeros((d, d))
rng = make_rng(1)
for _ in range(draws):
    P = sample_haar(d, ell, rng)
    acc += P @ P.T
mean = acc / draws
print(f"\nhaar E[P P^T] over {draws} draws:")
print(f"  diagonal range   [{mean.diagonal().min():.3f}, {mean.diagonal().max():.3f}]")
off = mean[~np.eye(d, dtype=bool)]
print(f"  off-diagonal max |.| = {np.abs(off).max():.3f}")
