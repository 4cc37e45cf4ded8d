"""
One scenario, start to finish
=============================

Run plain AODV and the defended variant on the same 25-node network with a
single flooding node, then compare the three headline metrics.
"""

from ndtaodv import ScenarioConfig, run_scenario

# defaults: 25 nodes on 1000 x 1000 m, 100 s, 5 CBR flows of 512 B every 0.25 s
base = ScenarioConfig(malicious=1, pause_time=10.0, seed=4)

for proto in ("aodv", "ndtaodv"):
    rep = run_scenario(base.replace(protocol=proto))
    print(f"{proto:8s} pdf={rep.pdf:.3f}  at={rep.avg_throughput:.1f} kbps  nrl={rep.nrl:.1f}")

# what kinds of packets went over the air in the defended run
print(rep.tx_by_kind)
print("detected at", rep.first_detection_time, "by", len(rep.broody_events), "nodes")
