"""
Rescaling the graph
===================

Scaling every edge weight by t moves the spectrum through the peak of the
disagreement gain. At each t = 1/lambda_i the adversary attains exactly 1/4
by seeding along the i-th eigenspace.
"""

# %%
from discord_lab import laplacian, t_sweep
from discord_lab.graph import random_connected_graph
import numpy as np

g = random_connected_graph(8, np.random.default_rng(3), edge_prob=0.4)
lam = np.clip(np.linalg.eigvalsh(laplacian(g)), 0, None)
print("spectrum:", np.round(lam, 4))

# %%
rows = t_sweep(g, resolution=16)
print(f"{len(rows)} sweep points; critical points:")
for row in rows:
    if row.critical:
        print(f"  t = {row.t:8.4f}  index {row.argmax_index}  value {row.value:.12f}")

# %%
# Between critical points the value dips below 1/4 and the argmax index walks
# down the spectrum as t grows.
coarse = rows[:: max(1, len(rows) // 12)]
for row in coarse:
    bar = "#" * int(row.value * 160)
    print(f"t={row.t:9.4f}  i={row.argmax_index}  {bar}")
