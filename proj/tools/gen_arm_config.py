#!/usr/bin/env python3
# Copyright (C) 2026 The dexgrasp Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the default arm description (data/arm_ur5.json).

DH parameters are the published UR5 values (standard convention,
T_i = Rz(theta_i + offset) Tz(d) Tx(a) Rx(alpha)). The base stands on the table
0.45 m to the camera's -x side with its z axis pointing away from the camera.
The documentation block records the flange pose at J = 0, multiplied out here
with numpy so the C++ forward kinematics can be checked against it.
"""

import argparse
import json
import math

import numpy as np

DH = [  # a, alpha, d, theta_offset
    (0.0, math.pi / 2, 0.089159, 0.0),
    (-0.425, 0.0, 0.0, 0.0),
    (-0.39225, 0.0, 0.0, 0.0),
    (0.0, math.pi / 2, 0.10915, 0.0),
    (0.0, -math.pi / 2, 0.09465, 0.0),
    (0.0, 0.0, 0.0823, 0.0),
]
LIMITS = [(-2 * math.pi, 2 * math.pi)] * 2 + [(-math.pi, math.pi)] + [(-2 * math.pi, 2 * math.pi)] * 3
BASE_XYZ = (-0.45, 0.0, 0.75)
BASE_RPY = (math.pi, 0.0, 0.0)
HOME = (0.0, -math.pi / 2, math.pi / 2, -math.pi / 2, -math.pi / 2, 0.0)


def rot_x(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, 1.0]])


def rot_z(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0, 0], [s, c, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1.0]])


def trans(x, y, z):
    t = np.eye(4)
    t[:3, 3] = (x, y, z)
    return t


def flange(joints):
    t = np.eye(4)
    for (a, alpha, d, off), q in zip(DH, joints):
        t = t @ rot_z(q + off) @ trans(0, 0, d) @ trans(a, 0, 0) @ rot_x(alpha)
    return t


def base_pose():
    r, p, y = BASE_RPY  # intrinsic XYZ
    rx, ry, rz = rot_x(r), np.eye(4), rot_z(y)
    c, s = math.cos(p), math.sin(p)
    ry[:3, :3] = [[c, 0, s], [0, 1, 0], [-s, 0, c]]
    return trans(*BASE_XYZ) @ rx @ ry @ rz


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("output")
    args = ap.parse_args()
    zero_base = flange([0.0] * 6)
    zero_cam = base_pose() @ zero_base
    doc = {
        "documentation": {
            "source": "UR5 standard DH parameters as published by the manufacturer",
            "flange_at_zero": {
                "position_base": zero_base[:3, 3].round(12).tolist(),
                "position_camera": zero_cam[:3, 3].round(12).tolist(),
                "rotation_camera": zero_cam[:3, :3].round(12).tolist(),
            },
        },
        "dh": [{"a": a, "alpha": al, "d": d, "theta_offset": o} for a, al, d, o in DH],
        "joint_limits": [list(l) for l in LIMITS],
        "base_pose": {"xyz": list(BASE_XYZ), "rpy": list(BASE_RPY)},
        "flange_in_hand": {"xyz": [0.0, 0.0, -0.02], "rpy": [0.0, 0.0, 0.0]},
        "home": list(HOME),
        "workspace_radius": 1.1,
        "ik": {"damping": 0.01, "max_iterations": 200, "position_tol": 1e-4, "orientation_tol": 1e-3,
               "orientation_weight": 0.5, "max_step": 0.5, "stall_window": 20, "kick": 0.3},
        "trajectory": {"waypoints": 20, "dt": 0.1},
        "stomp": {"iterations": 50, "rollouts": 8, "noise": 0.05, "clearance": 0.02, "proxy_radius": 0.04,
                  "obstacle_weight": 1000.0, "seed": 1},
    }
    with open(args.output, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
