"""
Box-constrained seeding
=======================

With every innate opinion in [-1, 1] the attack is a quadratic program over
the hypercube. The SDP relaxation gives an upper bound; random hyperplane
rounding of its Gram vectors gives a feasible sign vector within 2/pi.
"""

# %%
import math

import numpy as np

from discord_lab import linf_attack_sdp, linf_brute, linf_round, sigma
from discord_lab.graph import random_connected_graph

rng = np.random.default_rng(7)
print(f"{'n':>3} {'brute':>9} {'sdp':>9} {'rounded':>9} {'sdp/brute':>10}")
for n in (4, 6, 8, 10, 12):
    g = random_connected_graph(n, rng, edge_prob=0.5)
    S = sigma(g)
    sdp = linf_attack_sdp(S)
    _, rounded = linf_round(S, sdp.gram_vectors, trials=200)
    brute = linf_brute(S)[1]
    print(f"{n:3d} {brute:9.5f} {sdp.sdp_value:9.5f} {rounded:9.5f} {sdp.sdp_value / brute:10.5f}")

# %%
print(f"worst-case ratio allowed by the rounding argument: {math.pi / 2:.4f}")
print("certified duality gap on the last instance:", sdp.gap)
