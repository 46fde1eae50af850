import os


def log(source: str, message: str):
    """Formats and prints a log message with the class or module name."""
    if os.getenv("CBS_ANTILOC_QUIET") == "1":
        return
    print(f"[{source}] {message}", flush=True)
