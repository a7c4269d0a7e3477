"""Master seed splitting.

One integer seed drives a run. It is split into independent named sub-streams
so that the fBm path, the additive noise and the auxiliary uniform of the
two-step estimator never share random numbers:

    rng_path = substream(seed, "path")
    rng_noise = substream(seed, "noise")
    u = substream(seed, "grid").random()
"""

import numpy as np

from hurstnoise.errors import ParameterError

__all__ = ["STREAMS", "substream", "replicate_seed", "draw_seed"]

STREAMS: dict[str, int] = {"path": 0, "noise": 1, "grid": 2}


def substream(seed: int, name: str) -> np.random.Generator:
    """Generator for the named sub-stream of a master seed."""
    try:
        key = STREAMS[name]
    except KeyError as e:
        raise ParameterError(f"Unknown sub-stream {name!r}; expected one of {sorted(STREAMS)}") from e
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(key,)))


def replicate_seed(master: int, replicate: int) -> int:
    """Seed of Monte Carlo replicate r, a function of (master, r) only."""
    seq = np.random.SeedSequence(int(master), spawn_key=(len(STREAMS), int(replicate)))
    return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def draw_seed() -> int:
    """Fresh master seed from OS entropy, for runs without an explicit seed."""
    return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
