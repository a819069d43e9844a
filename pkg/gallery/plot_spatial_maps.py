"""
Spatial maps
============

The spatial map ``c`` weights the filter before correlation.  A binary map
keeps only the target rectangle; the quadratic maps decay smoothly away from
it, and ``ours`` holds a flat plateau over an enlarged rectangle first.

Maps are stored with the target centre at index ``(0, 0)``; ``from_origin``
moves it to the middle of the grid for display.
"""

import numpy as np

from rfct.spatial_map import build_map
from rfct.spectral import from_origin

grid = (40, 40)
target = (10, 10)

maps = {kind: build_map(kind, grid, target).plane for kind in ("binary", "rquadratic", "ours")}
for kind, plane in maps.items():
    print(f"{kind:10s} min {plane.min():.3f}  max {plane.max():.3f}  mean {plane.mean():.3f}")

# %%
# Plot the maps side by side together with their middle row.

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(2, 3, figsize=(10, 6))
    for col, (kind, plane) in enumerate(maps.items()):
        centred = from_origin(plane)
        axes[0, col].imshow(centred, cmap="viridis")
        axes[0, col].set_title(kind)
        axes[0, col].axis("off")
        axes[1, col].plot(centred[grid[0] // 2])
        axes[1, col].set_xlabel("column")
    axes[1, 0].set_ylabel("c")
    fig.tight_layout()
    plt.show()
