"""Deterministic pseudo-random sampling shared by certificate builders."""
from __future__ import annotations

import os
import random
from fractions import Fraction

DEFAULT_SEED = 20240611


def seed_from_env() -> int:
    raw = os.environ.get("SEED")
    return int(raw) if raw not in (None, "") else DEFAULT_SEED


def make_rng(seed: int | None = None) -> random.Random:
    return random.Random(seed_from_env() if seed is None else seed)


def unit_rational(rng: random.Random, primes, bound: int = 10**6) -> Fraction:
    """A random rational whose denominator is prime to every given prime."""
    num = rng.randint(-bound, bound)
    while True:
        den = rng.randint(1, 1000)
        if all(den % q for q in primes):
            return Fraction(num, den)
