import os


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


RING_ORDER_CAP = _env_int("SPRIME_RING_CAP", 256)
MODULE_ORDER_CAP = _env_int("SPRIME_MODULE_CAP", 256)
ENUM_CAP = _env_int("SPRIME_ENUM_CAP", 256)
