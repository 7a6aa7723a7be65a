"""Per-criterion result lines collected by test_acceptance and printed in the summary."""
import contextlib
import time

LINES = []


@contextlib.contextmanager
def criterion(number, title):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        LINES.append(f"criterion {number:>2}: FAIL  {title}  ({time.perf_counter() - start:.2f}s) {exc!r:.200}")
        print(LINES[-1])
        raise
    LINES.append(f"criterion {number:>2}: PASS  {title}  ({time.perf_counter() - start:.2f}s)")
    print(LINES[-1])
