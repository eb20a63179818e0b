#!/usr/bin/env python3
# Copyright (C) 2026 The dexgrasp Authors
# SPDX-License-Identifier: Apache-2.0
"""Renders the synthetic cylinder scene (data/scenes/cylinder/).

A capped cylinder (radius 30 mm, length 200 mm) lies on a table plane 0.75 m
in front of a downward-looking pinhole camera. Depth is ray-cast per pixel
centre and stored as 16-bit millimetres; the mask marks pixels whose first hit
is the cylinder. The ground-truth axis is written to truth.json.
"""

import argparse
import json
import math
import os

import numpy as np

W, H = 320, 240
FX = FY = 262.5
CX, CY = 159.5, 119.5
TABLE_Z = 0.75
RADIUS, LENGTH = 0.03, 0.2
YAW_DEG = 30.0
CENTER = np.array([0.02, -0.01, TABLE_Z - RADIUS])


def cylinder_hits(d, c, a, r, half):
    """Smallest positive ray parameter t (ray origin at 0) hitting the capped cylinder."""
    best = np.full(d.shape[0], np.inf)
    # lateral surface: |(t d - c) x a|^2 = r^2
    dp = d - np.outer(d @ a, a)
    cp = -c + (c @ a) * a
    qa = np.einsum("ij,ij->i", dp, dp)
    qb = 2.0 * (dp @ cp)
    qc = cp @ cp - r * r
    disc = qb * qb - 4 * qa * qc
    ok = disc >= 0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    for t in ((-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)):
        along = t * (d @ a) - c @ a
        good = ok & (t > 0) & (np.abs(along) <= half)
        best = np.where(good & (t < best), t, best)
    # caps
    for s in (-1.0, 1.0):
        cap = c + s * half * a
        denom = d @ a
        t = (cap @ a) / np.where(np.abs(denom) > 1e-12, denom, np.nan)
        p = t[:, None] * d
        rad = np.linalg.norm((p - cap) - np.outer((p - cap) @ a, a), axis=1)
        good = (t > 0) & (rad <= r)
        best = np.where(good & (t < best), t, best)
    return best


def write_pgm16(path, img):
    with open(path, "wb") as f:
        f.write(f"P5\n{W} {H}\n65535\n".encode())
        f.write(img.astype(">u2").tobytes())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    u, v = np.meshgrid(np.arange(W), np.arange(H))
    d = np.stack([(u - CX) / FX, (v - CY) / FY, np.ones_like(u, dtype=float)], axis=-1).reshape(-1, 3)
    yaw = math.radians(YAW_DEG)
    axis = np.array([math.cos(yaw), math.sin(yaw), 0.0])
    t_cyl = cylinder_hits(d, CENTER, axis, RADIUS, LENGTH / 2)
    t_table = TABLE_Z / d[:, 2]
    on_obj = t_cyl < t_table
    z = np.where(on_obj, t_cyl, t_table) * d[:, 2]

    depth_mm = np.round(z * 1000.0).astype(np.uint16).reshape(H, W)
    mask = (on_obj.reshape(H, W) * 255).astype(np.uint8)
    rgb = np.empty((H, W, 3), np.uint8)
    rgb[...] = (150, 140, 130)
    rgb[mask > 0] = (230, 200, 30)

    write_pgm16(os.path.join(args.outdir, "depth.pgm"), depth_mm)
    with open(os.path.join(args.outdir, "mask.pgm"), "wb") as f:
        f.write(f"P5\n{W} {H}\n255\n".encode() + mask.tobytes())
    with open(os.path.join(args.outdir, "rgb.ppm"), "wb") as f:
        f.write(f"P6\n{W} {H}\n255\n".encode() + rgb.tobytes())
    with open(os.path.join(args.outdir, "intrinsics.json"), "w") as f:
        json.dump({"fx": FX, "fy": FY, "cx": CX, "cy": CY, "width": W, "height": H}, f, indent=2)
        f.write("\n")
    with open(os.path.join(args.outdir, "truth.json"), "w") as f:
        json.dump({"axis": axis.tolist(), "center": CENTER.tolist(), "radius": RADIUS, "length": LENGTH,
                   "table_z": TABLE_Z, "mask_pixels": int(on_obj.sum())}, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
