from dataclasses import dataclass
from enum import StrEnum


class EventKind(StrEnum):
    ARRIVAL = "arrival"
    SERVICE_COMPLETION = "service_completion"
    ABANDONMENT = "abandonment"
    BACKOFFICE_COMPLETION = "backoffice_completion"
    EPOCH_BOUNDARY = "epoch_boundary"


@dataclass(slots=True, eq=False)
class Event:
    """A timestamped calendar entry.

    Attributes:
        time: simulation time in minutes
        kind: what happens at that time
        target: contact group (arrival), expert id (completions) or customer id
            (abandonment); None for epoch boundaries
        seq: insertion counter assigned by EventCalendar.schedule
        void: set when the event is cancelled; void events are skipped on pop
    """

    time: float
    kind: EventKind
    target: int | None = None
    seq: int = -1
    void: bool = False
