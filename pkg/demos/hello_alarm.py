"""
Hello alarm on a line
=====================

Eight nodes in a row, 200 m apart, attacker at the left end. Only node 1 can
hear the flood; the alarm then walks down the line one hello at a time.
"""

import numpy as np

from ndtaodv import Mobility, ScenarioConfig, Simulation

n = 8
positions = [(200.0 * i, 500.0) for i in range(n)]
cfg = ScenarioConfig(protocol="ndtaodv", nodes=n, connections=0, duration=12.0,
                     malicious=1, malicious_ids=(0,), attack_start=1.0, attack_stop=1.5)
sim = Simulation(cfg, mobility=Mobility.static(positions))
rep = sim.run()

aware = {ev.detector: ev.time for ev in reversed(rep.broody_events)}
times = np.array([aware.get(i, np.nan) for i in range(1, n)])
print("first aware at:", np.round(times, 3))
print("lag behind the previous node:", np.round(np.diff(times), 3))
