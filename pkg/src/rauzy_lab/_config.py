import os

STEP_CAP = 10_000
RETURN_CAP = 1_000_000


def cap(default: int) -> int:
    """``RAUZY_LAB_STEP_CAP`` overrides every iteration cap when set."""
    raw = os.environ.get("RAUZY_LAB_STEP_CAP")
    if raw is None:
        return default
    value = int(raw)
    if value < 1:
        raise ValueError("RAUZY_LAB_STEP_CAP must be a positive integer")
    return value
