"""Pure-Python reference implementation of the hot per-cell kernels.

The compiled extension (_core.pyx) mirrors these functions operation for
operation; both must produce bit-identical results so that a simulation
replays exactly regardless of which backend was selected at import.
"""

from __future__ import annotations

BACKEND = "python"


def life_next(alive: list[int], width: int, height: int, torus: bool) -> list[int]:
    """One synchronous Conway step (birth on 3, survival on 2 or 3)."""
    out = [0] * (width * height)
    for r in range(height):
        for c in range(width):
            n = 0
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    if dr == 0 and dc == 0:
                        continue
                    nr, nc = r + dr, c + dc
                    if torus:
                        nr %= height
                        nc %= width
                    elif not (0 <= nr < height and 0 <= nc < width):
                        continue
                    n += alive[nr * width + nc]
            i = r * width + c
            out[i] = 1 if n == 3 or (alive[i] and n == 2) else 0
    return out


def pastoral_patch_update(
    humidity: list[float],
    fresh: list[float],
    dry: list[float],
    trees: list[int],
    rain: float,
    evaporation: float,
    tree_uptake: float,
    grass_growth: float,
    dry_threshold: float,
    dry_rate: float,
    dry_decay: float,
) -> tuple[list[float], list[float], list[float]]:
    """Synchronous water/grass update; all reads are previous-tick values.

    Per cell: humidity gains rain and loses evaporation plus uptake per
    tree; fresh grass grows toward the free capacity (1 - fresh - dry) in
    proportion to humidity and dries out below the humidity threshold; dry
    grass decays. fresh + dry <= 1 is maintained by capping dry.
    """
    n = len(humidity)
    h2 = [0.0] * n
    f2 = [0.0] * n
    d2 = [0.0] * n
    for i in range(n):
        h = humidity[i]
        f = fresh[i]
        d = dry[i]
        hn = h + rain - evaporation - tree_uptake * trees[i]
        if hn < 0.0:
            hn = 0.0
        elif hn > 1.0:
            hn = 1.0
        growth = grass_growth * h * (1.0 - f - d)
        dryout = dry_rate * f if h < dry_threshold else 0.0
        fn = f + growth - dryout
        if fn < 0.0:
            fn = 0.0
        elif fn > 1.0:
            fn = 1.0
        dn = d + dryout - dry_decay * d
        if dn < 0.0:
            dn = 0.0
        elif dn > 1.0:
            dn = 1.0
        if dn > 1.0 - fn:
            dn = 1.0 - fn
        h2[i] = hn
        f2[i] = fn
        d2[i] = dn
    return h2, f2, d2


def fnv1a64_digest(data: bytes) -> int:
    """FNV-1a 64-bit over raw bytes."""
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h
