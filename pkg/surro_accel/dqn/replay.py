"""Experience replay memory for the DQN agent.

Transitions are kept in insertion order up to a fixed capacity. Minibatches
are drawn uniformly without replacement from the stream the caller passes in,
so sampling is reproducible from the agent seed.
"""

from collections import deque

from surro_accel.dqn.types import Transition
from surro_accel.stochastic.types import RngStream


class ReplayBuffer:
    """Bounded FIFO replay memory; the oldest transition is dropped first."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"capacity must be positive, got {capacity}")
        self.capacity = capacity
        self._items: deque[Transition] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def push(self, transition: Transition) -> None:
        self._items.append(transition)

    def clear(self) -> None:
        self._items.clear()

    def sample(self, size: int, stream: RngStream) -> list[Transition]:
        """Uniform minibatch without replacement."""
        if size > len(self._items):
            raise ValueError(f"cannot sample {size} from {len(self._items)} transitions")
        picks = stream.generator.choice(len(self._items), size=size, replace=False)
        return [self._items[int(i)] for i in picks]
