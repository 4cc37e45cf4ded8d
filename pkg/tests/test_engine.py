import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndtaodv.engine import TIMER_FIRE, Engine, PastEvent


def test_schedule_at_now_fires_first():
    eng = Engine()
    log = []
    eng.at(1.0, 0, TIMER_FIRE, log.append, "later")
    eng.at(0.0, 0, TIMER_FIRE, log.append, "now")
    eng.run_until(5)
    assert log == ["now", "later"]


def test_ties_dispatch_in_insertion_order():
    eng = Engine()
    log = []
    for name in "abcde":
        eng.at(2.0, 0, TIMER_FIRE, log.append, name)
    eng.run_until(2.0)
    assert log == list("abcde")


def test_past_event_rejected():
    eng = Engine()
    eng.run_until(1.0)
    with pytest.raises(PastEvent):
        eng.at(0.5, 0, TIMER_FIRE, print)


def test_run_until_empty_queue_advances_clock():
    eng = Engine()
    assert eng.run_until(100) == 0
    assert eng.now == 100


def test_run_until_boundary():
    eng = Engine()
    for t in (1, 2, 101):
        eng.at(t, 0, TIMER_FIRE, lambda: None)
    assert eng.run_until(100) == 2
    assert eng.now == 100
    assert eng.pending() == 1


def test_cancel_semantics():
    eng = Engine()
    hits = []
    h = eng.at(1.0, 0, TIMER_FIRE, hits.append, 1)
    assert eng.cancel(h) is True
    assert eng.cancel(h) is False
    eng.run_until(2)
    assert hits == []

    h2 = eng.at(3.0, 0, TIMER_FIRE, hits.append, 2)
    eng.run_until(4)
    assert hits == [2]
    assert eng.cancel(h2) is False


def test_fanout_counts_each_target():
    eng = Engine()
    got = []
    eng.at(1.0, (3, 1, 2), TIMER_FIRE, lambda tgt, tag: got.append((tgt, tag)), "x")
    assert eng.run_until(2) == 3
    assert got == [(3, "x"), (1, "x"), (2, "x")]


def test_trace_lines_and_hash():
    import io
    buf = io.StringIO()
    eng = Engine(trace=buf)
    eng.at(0.5, 7, TIMER_FIRE, lambda: None, detail="hello")
    eng.run_until(1)
    assert buf.getvalue() == "0.5\t7\tTimerFire\thello\n"
    assert len(eng.trace_hash) == 64


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(min_value=0, max_value=50, allow_nan=False), min_size=1, max_size=60))
def test_dispatch_order_is_total(times):
    eng = Engine()
    seen = []

    def record(t, i):
        seen.append((t, i))
        # events scheduled from inside a handler must still respect the order
        if i % 3 == 0:
            eng.at(eng.now, 0, TIMER_FIRE, lambda: seen.append((eng.now, 10_000 + i)))

    for i, t in enumerate(times):
        eng.at(t, 0, TIMER_FIRE, record, t, i)
    eng.run_until(60)
    keys = [t for t, _ in seen]
    assert keys == sorted(keys)
    originals = [(t, i) for t, i in seen if i < 10_000]
    assert originals == sorted(originals)
