#!/usr/bin/env python3
# Copyright (C) 2026 The dexgrasp Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the default hand description (data/hand_default.json).

Hand frame: the pinch axis runs along +x at height z = 0.05 m, the palm is the
z = 0 plane and the hand approaches objects along +z. Four fingers curl in
x-z planes at y = -0.03 .. 0.03; the thumb is a two-link chain in the y = 0
plane. Each finger is a coupled two-link chain (distal joint = 2x proximal).
"""

import argparse
import json
import math

L1, L2 = 0.045, 0.035          # finger link lengths (m)
T1, T2 = 0.040, 0.035          # thumb link lengths (m)
FINGER_LIMITS = (0.0, 1.25)    # proximal flexion (rad)
THUMB_LIMITS = ((0.0, 0.8), (0.2, 1.2))  # theta2 = 0 is the straight-arm singularity
FINGER_Y = (-0.03, -0.01, 0.01, 0.03)
FINGER_X = 0.05
THUMB_BASE = (-0.05, 0.0, 0.0)
N_FINGER, N_THUMB = 32, 16


def finger_tip(theta):
    # in the finger base frame; the finger closes toward -x
    x = -L1 * math.sin(theta) - L2 * math.sin(2 * theta)
    z = L1 * math.cos(theta) + L2 * math.cos(2 * theta)
    return [x, 0.0, z]


def thumb_tip(a, b):
    # thumb plane coordinates (u along +x, v along +z) relative to the plane point
    u = T1 * math.sin(a) + T2 * math.sin(a + b)
    v = T1 * math.cos(a) + T2 * math.cos(a + b)
    return [u, v]


def linspace(lo, hi, n):
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("output")
    args = ap.parse_args()

    fingers = []
    for y in FINGER_Y:
        angles = linspace(*FINGER_LIMITS, N_FINGER)
        fingers.append({
            "base": {"translation": [FINGER_X, y, 0.0], "rpy": [0.0, 0.0, 0.0]},
            "angles": [round(a, 12) for a in angles],
            "points": [[round(c, 12) for c in finger_tip(a)] for a in angles],
        })

    th1 = linspace(*THUMB_LIMITS[0], N_THUMB)
    th2 = linspace(*THUMB_LIMITS[1], N_THUMB)
    grid = [[round(c, 12) for c in thumb_tip(a, b)] for a in th1 for b in th2]

    doc = {
        "name": "default four-finger hand with planar thumb",
        "fingers": fingers,
        "thumb": {
            "plane_point": list(THUMB_BASE),
            "plane_normal": [0.0, -1.0, 0.0],
            "u_axis": [1.0, 0.0, 0.0],
            "theta1": {"min": THUMB_LIMITS[0][0], "max": THUMB_LIMITS[0][1], "count": N_THUMB},
            "theta2": {"min": THUMB_LIMITS[1][0], "max": THUMB_LIMITS[1][1], "count": N_THUMB},
            "grid": grid,
        },
        "joint_limits": [list(FINGER_LIMITS)] * 4 + [list(THUMB_LIMITS[0]), list(THUMB_LIMITS[1])],
        "pinch_axis": [[-0.04, 0.0, 0.05], [0.04, 0.0, 0.05]],
    }
    with open(args.output, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
