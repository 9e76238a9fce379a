from functools import lru_cache

from zjkit.builders import builder_corpus


@lru_cache(maxsize=None)
def _build(name, items):
    return builder_corpus(name, dict(items))


def group(name, **params):
    """Cached corpus build so expensive derived tables are shared across tests."""
    return _build(name, tuple(sorted(params.items())))


_ENTRIES: dict = {}


def entry_group(entry):
    """Cached build of a corpus entry, keyed by its display name."""
    if entry.name not in _ENTRIES:
        _ENTRIES[entry.name] = entry.build()
    return _ENTRIES[entry.name]
