from surro_accel.descore.calendar import EventCalendar
from surro_accel.descore.types import Event, EventKind

__all__ = ["Event", "EventCalendar", "EventKind"]
