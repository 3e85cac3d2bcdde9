"""
Low-rank approximations of 8x8 digits
=====================================

Uses the bundled sample of 20 images (pixel values 0..16).  PSNR takes 16 as
the peak value.
"""

import numpy as np

from vqsvd.algorithm import metrics, reconstruct, svd
from vqsvd.bench import DIGITS_MAX, bundled_digits_path, load_digits

images = load_digits(bundled_digits_path())
img = images[0]

for T in (3, 5, 8):
    res = svd(img, T=T, layers=4, seed=1)
    rec = reconstruct(res).real
    m = metrics(img, rec, DIGITS_MAX)
    print(f"T={T}: psnr {m.psnr:5.2f} dB  mse {m.mse:.3f}")

print("original / reconstruction (T=8):")
for row_a, row_b in zip(img.astype(int), np.clip(np.rint(rec), 0, 16).astype(int)):
    print(" ".join(f"{v:2d}" for v in row_a), "   ", " ".join(f"{v:2d}" for v in row_b))
