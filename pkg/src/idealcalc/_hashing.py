"""Hash memoization for frozen dataclasses.

Expression trees are immutable and used heavily as dict keys and cache
arguments; the generated ``__hash__`` walks the whole tree every time, so the
first result is stored on the instance.
"""


def memo_hash(cls):
    base = cls.__hash__
    if base is None:
        return cls

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            value = base(self)
            object.__setattr__(self, "_hash", value)
            return value

    cls.__hash__ = __hash__
    return cls
