"""
Channel bounds
==============

Minimum output entropy and Holevo quantity bounds for a few channels,
read from and written to the JSON channel format.
"""

import os
import tempfile

import numpy as np

from e2entropy import (
    RoofConfig,
    SeedSpec,
    bit_flip_channel,
    depolarizing_channel,
    holevo_lower_bound,
    identity_channel,
    min_output_entropy_bound,
    sample_channel,
)
from e2entropy.formats import read_channel, write_channel

channels = {
    "identity": identity_channel(2),
    "depolarizing": depolarizing_channel(2),
    "depolarizing p=0.5": depolarizing_channel(2, 0.5),
    "bit flip p=0.1": bit_flip_channel(0.1),
    "random 2->3": sample_channel(2, 3, 2, SeedSpec(2), 0),
}

cfg = RoofConfig(restarts=3, seed=2)
for name, phi in channels.items():
    r = min_output_entropy_bound(phi, cfg)
    h = holevo_lower_bound(phi, np.eye(2) / 2, cfg)
    print(f"{name:20s} S_min <= {r.bound_value:.5f} (entropy at optimum "
          f"{r.quantities['direct_estimate']:.5f}); chi >= {h.bound_value:.5f} "
          f"(ensemble chi {h.quantities['chi_estimate']:.5f})")

# channel files round-trip exactly
path = os.path.join(tempfile.mkdtemp(), "depolarizing.json")
write_channel(path, channels["depolarizing"])
print(path, np.array_equal(read_channel(path).kraus, channels["depolarizing"].kraus))
