"""Frozen calibration constants.

The proofs behind the estimator guarantees fix only orders of magnitude; the
multiplicative constants below were calibrated once with scripts/calibrate.py
(Monte-Carlo sweeps over in-model instances) and are frozen here. Regenerate
with that script before changing any value.
"""

# epsilon multipliers: eps = C * (scale law) for each model's distance estimator
C_EPS_TOEPLITZ = 0.50
C_EPS_LATENT = 0.50
C_EPS_MISSING = 0.50

# delta multipliers where the scale law leaves a free constant
C_DELTA_LATENT = 1.0      # delta = C * A * sqrt(log n)
C_DELTA_MISSING = 1.4142135623730951  # delta = C * A (matches the banded bound)

# sup-norm pipeline: delta floor on the middle block, and the frozen
# loss / ||E||_inf constant reported by the adversarial property suite
C_SUP_DELTA = 2.0
C_SUP_LOSS = 6.0

# exact-distance (epsilon -> 0) radii policy
EXACT_BALL_FRACTION = 0.5   # rho1 = rho2 = fraction * smallest positive distance
EXACT_EDGE_MARGIN = 1.2     # rho3 = margin * largest minimum-spanning-tree edge

# perfect-recovery separation condition: families must satisfy
# rho* >= (1/delta) * C_SEP * (A sqrt(n) + sqrt(A) n^0.75 log^0.25 n)
C_SEP = 1e-3

# acceptance band for the log-log rate slope (exponent 3/4 with sqrt(n) and
# log^(1/4) corrections at desk scale)
RATE_SLOPE_BAND = (0.60, 0.95)
