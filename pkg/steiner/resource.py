from typing import Any

SUMMARY_THRESHOLD = 8


def _summary(value: Any) -> str:
    shape = getattr(value, "shape", None)
    if isinstance(shape, tuple):
        return f"array{shape}"
    if isinstance(value, (list, tuple, set, frozenset, dict)) and len(value) > SUMMARY_THRESHOLD:
        return f"{type(value).__name__}[{len(value)}]"
    return repr(value)


class Resource:
    """Compact repr for value objects; private attributes are skipped and bulky values summarized."""

    def __repr__(self):
        attrs = " ".join(f"{k}={_summary(v)}" for k, v in vars(self).items() if not k.startswith('_'))
        return f"<{self.__class__.__name__} @{id(self) & 0xFFFFFF} {attrs}>"
