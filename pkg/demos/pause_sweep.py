"""
Pause-time sweep
================

The experiment grid in miniature: pause time x protocol x seed with one
attacker, written to CSV and pivoted into one series per protocol.
Use more seeds (and ``workers``) for smoother curves.
"""

import os

from ndtaodv import ScenarioConfig, pivot, sweep, write_csv

rows = sweep(ScenarioConfig(), pause_times=[0, 10, 20], malicious_counts=[1],
             protocols=["aodv", "ndtaodv"], seeds=[1, 2, 3],
             workers=os.cpu_count() or 1)

write_csv(rows, "pause_sweep.csv")

for metric in ("pdf", "nrl"):
    header, table = pivot(rows, metric)
    print(metric)
    print("  ".join(f"{h:>12s}" for h in header))
    for line in table:
        print("  ".join(f"{v:12.4f}" for v in line))

# the same thing from the shell:
#   ndtaodv sweep --pause-times 0,10,20 --malicious 1 --seeds 1..3 --out pause_sweep.csv
#   ndtaodv plot --in pause_sweep.csv --metric pdf
