"""Future-event list for the call-center simulation.

Events pop in (time, seq) order, so simultaneous events run in the order they
were scheduled. Cancellation is lazy: cancelled events stay in the heap with
their void flag set and are skipped when they reach the top.
"""

import heapq
import logging
from collections.abc import Callable

from surro_accel.descore.types import Event
from surro_accel.errors import CausalityError

logger = logging.getLogger(__name__)


class EventCalendar:
    """A clock plus a priority queue of events.

    Attributes:
        clock: time of the last popped event (never decreases)
        scheduled: events ever scheduled
        popped: events returned by pop_next
        cancelled: events voided by cancel or discard
    """

    def __init__(self, clock: float = 0.0):
        self.clock = clock
        self._heap: list[tuple[float, int, Event]] = []
        self._next_seq = 0
        self.scheduled = 0
        self.popped = 0
        self.cancelled = 0

    def __len__(self) -> int:
        """Number of pending, non-void events."""
        return self.scheduled - self.popped - self.cancelled

    def schedule(self, event: Event) -> Event:
        """Enqueue an event and assign its sequence number.

        Raises:
            CausalityError: event.time is before the current clock
        """
        if event.time < self.clock:
            raise CausalityError(
                f"cannot schedule {event.kind} at t={event.time} before clock t={self.clock}"
            )
        event.seq = self._next_seq
        self._next_seq += 1
        self.scheduled += 1
        heapq.heappush(self._heap, (event.time, event.seq, event))
        return event

    def pop_next(self) -> Event | None:
        """Remove and return the earliest non-void event, advancing the clock.

        Returns None (clock unchanged) when nothing is pending.
        """
        while self._heap:
            time, _, event = heapq.heappop(self._heap)
            if event.void:
                continue
            self.clock = time
            self.popped += 1
            return event
        return None

    def peek_time(self) -> float | None:
        while self._heap and self._heap[0][2].void:
            heapq.heappop(self._heap)
        return self._heap[0][0] if self._heap else None

    def discard(self, event: Event) -> bool:
        """Void one pending event; False if it already popped or was voided."""
        if event.void or event.seq < 0 or not any(e is event for _, _, e in self._heap):
            return False
        event.void = True
        self.cancelled += 1
        return True

    def cancel(self, predicate: Callable[[Event], bool]) -> int:
        """Void every pending event matching predicate and return how many."""
        count = 0
        for _, _, event in self._heap:
            if not event.void and predicate(event):
                event.void = True
                count += 1
        self.cancelled += count
        if count:
            logger.debug("cancelled events", extra={"count": count})
        return count
