"""
Figure tables
=============

The qubit curve S(x) against 2 log 2 sqrt(x(1-x)), and the difference
c_3 sqrt(e2) - S over the probability triangle.
"""

import numpy as np

from e2entropy import fig1_data, fig2_data

rows = fig1_data(20)
for x, s, bound in rows[::4]:
    print(f"x={x:.2f}  S={s:.5f}  bound={bound:.5f}")

x, y, d = fig2_data(60).T
k = np.argmax(d)
print(f"triangle: {d.size} points, min {d.min():.2e}, max {d[k]:.4f} at ({x[k]:.3f}, {y[k]:.3f})")

# write the full tables next to this script
np.savetxt("fig1.csv", fig1_data(1000), delimiter=",", header="x,entropy,bound", comments="")
np.savetxt("fig2.csv", fig2_data(200), delimiter=",", header="x,y,diff", comments="")
