"""Shared PASS/FAIL registry for the acceptance suite, printed at the end of the run."""

import contextlib

# criterion number -> (title, "PASS" / "FAIL", detail)
RESULTS: dict[int, tuple[str, str, str]] = {}


def line(num: int) -> str:
    title, status, detail = RESULTS[num]
    return f"{status} criterion {num:2d}: {title}" + (f" ({detail})" if detail else "")


@contextlib.contextmanager
def criterion(num: int, title: str):
    """Record PASS when the block finishes, FAIL (and re-raise) otherwise.

    The block may fill ``notes`` with short details for the summary line.
    """
    notes: list[str] = []
    try:
        yield notes
    except BaseException as exc:
        notes.append(f"{type(exc).__name__}: {str(exc)[:120]}")
        RESULTS[num] = (title, "FAIL", "; ".join(notes))
        print(line(num))
        raise
    RESULTS[num] = (title, "PASS", "; ".join(notes))
    print(line(num))
