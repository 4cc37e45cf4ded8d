import re

import pytest

from ndtaodv import Mobility, ScenarioConfig, Simulation
from ndtaodv.traffic import Flow


def static_sim(positions, protocol="aodv", flows=(), mac="ideal", duration=20.0,
               malicious_ids=None, **cfg_kw):
    """A Simulation over fixed node positions with hand-picked flows."""
    ids = tuple(malicious_ids) if malicious_ids else None
    cfg = ScenarioConfig(protocol=protocol, nodes=len(positions), duration=duration,
                         connections=len(flows), mac=mac,
                         malicious=len(ids) if ids else 0, malicious_ids=ids, **cfg_kw)
    fl = [Flow(i, s, d, cfg.packet_size, cfg.cbr_interval, start, duration - 1.0)
          for i, (s, d, start) in enumerate(flows)]
    return Simulation(cfg, mobility=Mobility.static(positions), flows=fl)


def line_positions(n, spacing=200.0):
    return [(i * spacing, 0.0) for i in range(n)]


def bfs_hops(positions, rng, src):
    """Hop distances on the unit-disk graph, by plain BFS."""
    import math
    n = len(positions)
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for v in range(n):
                if v not in dist and math.dist(positions[u], positions[v]) <= rng:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


@pytest.fixture
def line4():
    return static_sim(line_positions(4))


# -- acceptance reporting -------------------------------------------------------

_CRITERIA: dict = {}  # number -> (label, failed test ids)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)(\w*)", report.nodeid)
    if not m:
        return
    if report.when != "call" and report.outcome == "passed":
        return
    num = int(m.group(1))
    label, failed = _CRITERIA.setdefault(num, (m.group(2).strip("_"), []))
    if report.outcome != "passed":
        failed.append(report.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        label, failed = _CRITERIA[num]
        status = "FAIL" if failed else "PASS"
        extra = f"  ({', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {num}: {status}{extra}")
