"""Shared hand-built gaze fixtures."""


def hz60(n, start=0):
    return [round((start + k) * 1000 / 60) for k in range(n)]


def two_cluster_samples():
    """12 samples at (0.2, 0.2), 3 transition samples, 12 samples at (0.8, 0.8)."""
    t = hz60(27)
    xy = [(0.2, 0.2)] * 12 + [(0.35, 0.35), (0.5, 0.5), (0.65, 0.65)] + [(0.8, 0.8)] * 12
    return t, [p[0] for p in xy], [p[1] for p in xy]
