"""Collects one pass/fail line per acceptance criterion for the summary."""

RESULTS: dict = {}


def record(key: str, ok: bool, text: str) -> str:
    line = f"{'PASS' if ok else 'FAIL'} criterion {key}: {text}"
    RESULTS[key] = line
    print(line)
    return line
