import functools
import time
from typing import Any, Callable, Type

from src.utils.logger import log


def retry_on(exception_type: Type[BaseException] = Exception, max_attempts: int = 3) -> Callable:
    """Re-invokes the function while it raises `exception_type`, up to max_attempts calls."""

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            for attempt in range(1, max_attempts + 1):
                try:
                    return func(*args, **kwargs)
                except exception_type as e:
                    if attempt < max_attempts:
                        log(func.__name__, f"⚠️ retry ({attempt}/{max_attempts}): {e}")
                    else:
                        log(func.__name__, f"❌ giving up after {max_attempts} attempts: {e}")
                        raise

        return wrapper

    return decorator


def log_execution(label: str) -> Callable:
    """Logs START/END/FAILED lines with the elapsed wall time."""

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            start_time = time.perf_counter()
            log(label, "START")
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                duration = time.perf_counter() - start_time
                log(label, f"❌ FAILED - {e} | {duration:.2f}s")
                raise
            duration = time.perf_counter() - start_time
            log(label, f"✅ END | {duration:.2f}s")
            return result

        return wrapper

    return decorator
