#!/usr/bin/env python3
# Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
# Licensed under the Apache License, Version 2.0 (the "License");
"""Writes a deterministic stand-in for the LIBSVM ``a1a`` binary dataset.

The real file is one-hot encoded census data: 123 binary features split into
14 categorical groups, exactly one active feature per group, labels +1/-1 with
roughly a quarter positive. This script reproduces that shape with a latent
logistic model so the benchmark runs without network access. Drop the real
``a1a`` next to it (or point EXTRA_NEWTON_A1A at it) to use the original.
"""

import argparse
import math
import random

GROUP_SIZES = [5, 8, 5, 16, 5, 7, 14, 6, 5, 2, 2, 2, 5, 41]
assert sum(GROUP_SIZES) == 123


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=1605)
    parser.add_argument("--seed", type=int, default=20221)
    parser.add_argument("--out", default="data/a1a_like")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    # Skewed category frequencies, like real census attributes.
    probs = []
    for size in GROUP_SIZES:
        w = [rng.paretovariate(1.2) for _ in range(size)]
        s = sum(w)
        probs.append([x / s for x in w])
    weights = [rng.gauss(0.0, 1.0) for _ in range(123)]
    bias = -1.6

    with open(args.out, "w") as out:
        for _ in range(args.rows):
            active = []
            offset = 0
            for size, p in zip(GROUP_SIZES, probs):
                k = rng.choices(range(size), weights=p)[0]
                active.append(offset + k)
                offset += size
            margin = bias + sum(weights[j] for j in active) * 0.6
            label = 1 if rng.random() < 1.0 / (1.0 + math.exp(-margin)) else -1
            feats = " ".join(f"{j + 1}:1" for j in active)
            out.write(f"{label:+d} {feats} \n")


if __name__ == "__main__":
    main()
