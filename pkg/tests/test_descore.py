import pytest

from surro_accel.descore import Event, EventCalendar, EventKind
from surro_accel.errors import CausalityError
from surro_accel.stochastic.types import RngStream


def arrival(time: float, target: int = 0) -> Event:
    return Event(time, EventKind.ARRIVAL, target=target)


def pop_all(calendar: EventCalendar) -> list[Event]:
    events = []
    while (event := calendar.pop_next()) is not None:
        events.append(event)
    return events


def test_events_pop_in_time_order():
    calendar = EventCalendar()
    for t in (3.0, 1.0, 2.0):
        calendar.schedule(arrival(t))
    assert [e.time for e in pop_all(calendar)] == [1.0, 2.0, 3.0]
    assert calendar.clock == 3.0


def test_simultaneous_events_pop_in_insertion_order():
    calendar = EventCalendar()
    first = calendar.schedule(arrival(5.0, target=1))
    second = calendar.schedule(arrival(5.0, target=2))
    assert pop_all(calendar) == [first, second]


def test_event_at_clock_pops_before_later_events():
    calendar = EventCalendar()
    calendar.schedule(arrival(4.0))
    calendar.schedule(arrival(2.0))
    calendar.pop_next()
    now = calendar.schedule(arrival(calendar.clock, target=9))
    assert calendar.pop_next() is now


def test_scheduling_in_the_past_is_a_causality_error():
    calendar = EventCalendar()
    calendar.schedule(arrival(10.0))
    calendar.pop_next()
    with pytest.raises(CausalityError):
        calendar.schedule(arrival(9.0))


def test_empty_calendar_returns_none_and_keeps_clock():
    calendar = EventCalendar(clock=7.0)
    assert calendar.pop_next() is None
    assert calendar.clock == 7.0
    assert calendar.peek_time() is None


def test_random_events_pop_sorted():
    generator = RngStream(1).generator
    calendar = EventCalendar()
    for t in generator.uniform(0, 1000, size=10_000):
        calendar.schedule(arrival(float(t)))
    popped = [(e.time, e.seq) for e in pop_all(calendar)]
    assert popped == sorted(popped)
    assert len(popped) == 10_000


def test_cancel_only_event():
    calendar = EventCalendar()
    calendar.schedule(arrival(1.0))
    assert calendar.cancel(lambda e: True) == 1
    assert calendar.pop_next() is None


def test_cancel_abandonment_then_pop_next_valid_event():
    calendar = EventCalendar()
    calendar.schedule(Event(1.0, EventKind.ABANDONMENT, target=4))
    service = calendar.schedule(Event(2.0, EventKind.SERVICE_COMPLETION, target=0))
    cancelled = calendar.cancel(
        lambda e: e.kind is EventKind.ABANDONMENT and e.target == 4
    )
    assert cancelled == 1
    assert calendar.peek_time() == 2.0
    assert calendar.pop_next() is service


def test_cancel_without_match_changes_nothing():
    calendar = EventCalendar()
    calendar.schedule(arrival(1.0))
    assert calendar.cancel(lambda e: False) == 0
    assert len(calendar) == 1
    assert calendar.cancelled == 0


def test_discard_voids_one_pending_event():
    calendar = EventCalendar()
    event = calendar.schedule(arrival(1.0))
    assert calendar.discard(event)
    assert not calendar.discard(event)
    assert calendar.pop_next() is None


def test_counts_are_conserved():
    generator = RngStream(2).generator
    calendar = EventCalendar()
    for step in range(2_000):
        choice = generator.integers(0, 3)
        if choice == 0:
            calendar.schedule(arrival(calendar.clock + float(generator.uniform(0, 10))))
        elif choice == 1:
            calendar.pop_next()
        else:
            calendar.cancel(lambda e, s=step: e.seq % 7 == s % 7)
        assert calendar.scheduled == calendar.popped + calendar.cancelled + len(calendar)
