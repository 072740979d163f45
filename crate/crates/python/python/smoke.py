"""Smoke test for the pycantor extension module."""

import math

import pycantor

ZETA3 = math.log(2) / math.log(3)

assert abs(pycantor.hausdorff_dimension(1 / 3) - ZETA3) < 1e-12
assert abs(pycantor.varsigma_dimension(1 / 3) - ZETA3) < 0.02
assert pycantor.classify(0.86, 0.9) == "super"
assert pycantor.classify(0.86, 0.6) == "sub"

s = pycantor.PreFractal(1 / 3, 2)
assert len(s) == 4
assert s.flag(0.4, 0.6) == 0
assert abs(s.lebesgue_measure() - 4 / 9) < 1e-12

S = pycantor.Staircase(1 / 3, convention_name="unit")
assert S(0.5) == 0.5
assert abs(S.inverse(0.5) - 1 / 3) < 1e-12
lower, upper = s.darboux([1.0] * 8, 0.0, 1.0, S)
assert abs(lower - 1.0) < 1e-9 and abs(upper - 1.0) < 1e-9

ex1 = pycantor.example("ex1")
assert abs(ex1["integral"]) < 1e-6
ex2 = pycantor.example("ex2", "gamma-scaled")
assert abs(ex2["integral"] / 0.2846 - 1) < 0.01

d = pycantor.Diffusion("super", ZETA3)
assert abs(d.normalization(1.0) - 1) < 1e-6
assert abs(d.msd(1.0)["msd_s"] - 2) < 1e-6
walk = d.simulate_walk(walkers=2000, seed=3)
assert abs(walk["fitted_exponent"] - 1 / ZETA3) < 0.1

print("pycantor smoke test passed")
