"""Shared random generators for the test suite (all RNG use is seeded)."""

import random

from gamiso.syntax import (TArrow, TBool, TNat, TProd, TRef, TUnit, TypeExpr,
                           type_size)

UNIT, BOOL, NAT = TUnit(), TBool(), TNat()


def rand_type(rng: random.Random, size: int, lang: str = "l2") -> TypeExpr:
    """A random type of syntactic size at most `size` (size counts nodes)."""
    bases = (UNIT, BOOL, NAT) if lang == "lnat" else (UNIT, BOOL)
    if size <= 1:
        return rng.choice(bases)
    roll = rng.random()
    if roll < 0.25:
        return rng.choice(bases)
    if roll < 0.45 or size < 3:
        return TRef(rand_type(rng, size - 1, lang))
    left_budget = rng.randint(1, size - 2)
    left = rand_type(rng, left_budget, lang)
    right = rand_type(rng, size - 1 - type_size(left), lang)
    ctor = TProd if rng.random() < 0.5 else TArrow
    return ctor(left, right)


def rand_type_exact_cap(rng: random.Random, size: int,
                        lang: str = "l2") -> TypeExpr:
    t = rand_type(rng, size, lang)
    assert type_size(t) <= size
    return t
