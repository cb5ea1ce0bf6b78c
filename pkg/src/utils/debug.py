"""Debug and provenance utilities.

Provides:
- Structured debug message formatting
- Conversion of numeric results (numpy scalars, complex numbers) to JSON-safe data
- Operation timing, usable as a sync or async context manager

Timing is safe to use with ctx=None (only the wall time is recorded).
"""

from typing import Optional, Dict, Any
import logging
import math
import time

import numpy as np

logger = logging.getLogger(__name__)

# Maximum value length before truncation (1KB)
MAX_VALUE_LENGTH = 1024


def format_debug_message(context: str, description: str, **kwargs) -> str:
    """Format debug message with consistent structure.

    Args:
        context: Operation context (e.g., "partition_function")
        description: Human-readable description (e.g., "Enumerating")
        **kwargs: Additional key-value pairs to include

    Returns:
        Formatted debug string: "context: description (key1=value1, key2=value2)"

    Example:
        >>> format_debug_message("enumerate", "Starting", faces=4, sources=2)
        "enumerate: Starting (faces=4, sources=2)"
    """
    message = f"{context}: {description}"

    if kwargs:
        pairs = []
        for key, value in kwargs.items():
            if isinstance(value, str):
                if len(value) > MAX_VALUE_LENGTH:
                    value = value[:MAX_VALUE_LENGTH] + "...truncated"
                pairs.append(f"{key}='{value}'")
            elif isinstance(value, float):
                pairs.append(f"{key}={value:.6g}")
            else:
                pairs.append(f"{key}={value}")

        message += f" ({', '.join(pairs)})"

    return message


def to_jsonable(data: Any) -> Any:
    """Convert numeric payloads to JSON-safe structures.

    Complex numbers become {"re": ..., "im": ...}; numpy scalars and arrays
    become Python floats and lists; tuples become lists; non-finite floats
    become strings so the output stays strict JSON.

    Example:
        >>> to_jsonable({"f": 1+2j, "x": np.float64(0.5)})
        {"f": {"re": 1.0, "im": 2.0}, "x": 0.5}
    """
    if isinstance(data, dict):
        return {str(key): to_jsonable(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [to_jsonable(value) for value in data]
    if isinstance(data, np.ndarray):
        return to_jsonable(data.tolist())
    if isinstance(data, (complex, np.complexfloating)):
        return {"re": to_jsonable(float(data.real)), "im": to_jsonable(float(data.imag))}
    if isinstance(data, np.integer):
        return int(data)
    if isinstance(data, (float, np.floating)):
        value = float(data)
        return value if math.isfinite(value) else str(value)
    return data


class TimingContext:
    """Context manager for timing operations.

    Works with both `with` and `async with`. On exit the duration is stored
    in `elapsed` (seconds), logged at debug level, and sent to ctx.debug()
    when a FastMCP context is given.

    Example:
        with TimingContext(None, "partition_function") as timer:
            z = partition_function(domain, bc, ())
        record.wall_time = timer.elapsed
    """

    def __init__(self, ctx: Optional[Any], operation_name: str):
        """Initialize timing context.

        Args:
            ctx: FastMCP Context object (or None)
            operation_name: Name of operation being timed
        """
        self.ctx = ctx
        self.operation_name = operation_name
        self.start_time: Optional[float] = None
        self.elapsed: float = 0.0

    def _stop(self) -> str:
        self.elapsed = time.perf_counter() - self.start_time
        message = f"{self.operation_name} (duration={self.elapsed * 1000:.2f}ms)"
        logger.debug(message, extra={"operation": self.operation_name, "elapsed": self.elapsed})
        return message

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self._stop()
        return False

    async def __aenter__(self):
        """Start timing."""
        self.start_time = time.perf_counter()
        return self

    async def __aexit__(self, exc_type, exc_val, exc_tb):
        """Stop timing and log duration."""
        message = self._stop()
        if self.ctx:
            await self.ctx.debug(message)

        # Don't suppress exceptions
        return False

