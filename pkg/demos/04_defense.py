"""
Spending a resistance budget
============================

A defender scales each node's stubbornness. Optimal weights come from the
smallest dominating diagonal of Sigma under the chosen budget, after which
the worst-case attack value is the top eigenvalue of W^-1/2 Sigma W^-1/2.
"""

# %%
import numpy as np

from discord_lab import Budget, defend, sigma, verify_defense
from discord_lab.graph import path_graph, star_graph

for name, g in {"star S3": star_graph(3), "path P5": path_graph(5)}.items():
    for h in Budget:
        r = defend(g, h=h)
        print(f"{name}  h={h.value:<4}  undefended {r.undefended_value:.5f}  defended {r.defense_value:.5f}")
        print("   weights", np.round(r.weights, 4))

# %%
# On the star the leaves carry more of Sigma's diagonal than the center,
# so the defender shores up the leaves.
S = sigma(star_graph(3))
print("diag(Sigma) on S3:", np.round(np.diag(S), 4))

# %%
# No random allocation on the same budget surface does better.
rng = np.random.default_rng(1)
K = defend(star_graph(3)).defense_value
w = rng.exponential(size=(5000, 4))
w *= 4 / w.sum(axis=1, keepdims=True)
best = min(verify_defense(S, wi) for wi in w)
print(f"optimal K = {K:.6f}, best of 5000 random allocations = {best:.6f}")
