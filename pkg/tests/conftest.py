import mpmath

mpmath.mp.dps = 30
