"""
Watching a flood get caught
===========================

A stationary network, one attacker that starts flooding at t = 5 s. The
neighbors count the requests it originates and blacklist it once the count
passes the peak value; everyone else hears about it from hello beacons.
"""

from ndtaodv import Mobility, ScenarioConfig, Simulation

cfg = ScenarioConfig(protocol="ndtaodv", malicious=1, seed=2, attack_start=5.0,
                     duration=20.0)

# freeze the random waypoint start positions so nobody moves
walk = Mobility.random_waypoint(cfg.nodes, cfg.width, cfg.height, cfg.duration,
                                0.0, cfg.speed_min, cfg.speed_max, cfg.seed)
frozen = Mobility.static([tuple(p) for p in walk.positions(0.0)])

sim = Simulation(cfg, mobility=frozen)
rep = sim.run()

attacker = cfg.malicious_nodes()[0]
print("attacker:", attacker, "neighbors:", sorted(sim.channel.neighbors(attacker)))

# "peak" = caught by counting, "hat" = learnt from a neighbor's hello
for ev in rep.broody_events:
    print(f"t={ev.time:8.4f}  node {ev.detector:2d} marks {ev.detected} ({ev.via})")

print("latency after flood onset:", rep.first_detection_time - cfg.attack_start)
