"""
Where the adversary pushes
==========================

An adversary with an L2 budget on innate opinions picks the top eigenvector
of a matrix function of the Laplacian. This script compares several targets
on a few small graphs and checks the closed-form disagreement ceiling R^2/4.
"""

# %%
import numpy as np

from discord_lab import ObjectiveSpec, l2_attack, laplacian, sigma
from discord_lab.graph import cycle_graph, path_graph, random_connected_graph, star_graph

graphs = {
    "path P5": path_graph(5),
    "cycle C6": cycle_graph(6),
    "star S4": star_graph(4),
    "random n=12": random_connected_graph(12, np.random.default_rng(0), edge_prob=0.3),
}

# %%
# The disagreement gain x/(1+x)^2 peaks at x = 1, so graphs with an
# eigenvalue near 1 get closest to the ceiling of 1/4.
print(f"{'graph':<14}{'spectrum':<40}{'value':>8}  argmax")
for name, g in graphs.items():
    lam = np.clip(np.linalg.eigvalsh(laplacian(g)), 0, None)
    r = l2_attack(g)
    spec = " ".join(f"{x:.2f}" for x in lam[:6])
    print(f"{name:<14}{spec:<40}{r.optimal_value:8.4f}  {r.argmax_indices}")

# %%
# Other objectives on the same random graph.
g = graphs["random n=12"]
objectives = {
    "disagreement": ObjectiveSpec.disagreement(),
    "repeated T=3": ObjectiveSpec.repeated(3),
    "repeated T=inf": ObjectiveSpec.repeated(np.inf),
    "displacement": ObjectiveSpec.displacement(),
    "pd": ObjectiveSpec.pd(),
}
for label, obj in objectives.items():
    r = l2_attack(g, obj)
    print(f"{label:<16} value {r.optimal_value:.5f}  eigenvalue {r.argmax_eigenvalue:.4f}")

# %%
# The seed returned is a unit vector attaining the value in the quadratic form.
S = sigma(g)
s = l2_attack(g).seed_basis[:, 0]
print("s^T Sigma s =", s @ S @ s)
