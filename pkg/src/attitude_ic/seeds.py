from .errors import ValidationError


def seed_set(nodes, n):
    """Sorted, duplicate-free tuple of node ids, each checked against ``n``."""
    out = sorted({int(v) for v in nodes})
    for v in out:
        if not 0 <= v < n:
            raise ValidationError(f"seed {v} outside [0, {n})")
    return tuple(out)


def seeds_from_labels(g, labels):
    return seed_set((g.index_of(lab) for lab in labels), g.n)
