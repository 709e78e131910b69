class ChatProfilerError(Exception):
    pass


class InputError(ChatProfilerError):
    """Malformed transcripts, configs or resource files."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = []
        if path:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{':'.join(where)}: {message}" if where else message)


class InvariantError(ChatProfilerError):
    """An internal consistency check failed."""
