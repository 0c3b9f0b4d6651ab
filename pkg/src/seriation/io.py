"""File formats: CSV matrices, 1-based permutation lines, instance directories."""

from __future__ import annotations

import os

import numpy as np

from .models import LatentSpec, ModelInstance
from .perms import Permutation
from .robinson import ToeplitzSpec

_FMT = "%.17g"  # round-trips float64 exactly


def save_matrix(path: str, M: np.ndarray) -> None:
    np.savetxt(path, np.asarray(M, dtype=float), fmt=_FMT, delimiter=",")


def load_matrix(path: str) -> np.ndarray:
    M = np.loadtxt(path, delimiter=",", ndmin=2)
    return np.asarray(M, dtype=float)


def save_permutation(path: str, P: Permutation) -> None:
    with open(path, "w") as fh:
        fh.write(" ".join(str(i + 1) for i in P.map))
        fh.write("\n")


def load_permutation(path: str) -> Permutation:
    with open(path) as fh:
        entries = fh.read().split()
    return Permutation(np.asarray([int(e) - 1 for e in entries], dtype=np.int64))


def save_meta(path: str, meta: dict) -> None:
    with open(path, "w") as fh:
        for key, value in meta.items():
            fh.write(f"{key}={value}\n")


def load_meta(path: str) -> dict:
    meta = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and "=" in line:
                key, value = line.split("=", 1)
                meta[key] = value
    return meta


def save_instance(dirpath: str, inst: ModelInstance) -> None:
    os.makedirs(dirpath, exist_ok=True)
    save_matrix(os.path.join(dirpath, "X.csv"), inst.X)
    save_matrix(os.path.join(dirpath, "Y.csv"), inst.Y)
    save_permutation(os.path.join(dirpath, "pi_star.txt"), inst.pi_star)
    if inst.mask is not None:
        save_matrix(os.path.join(dirpath, "B.csv"), inst.mask)
    if inst.V is not None:
        np.savetxt(os.path.join(dirpath, "V.txt"), inst.V, fmt=_FMT)
    meta = {
        "model": inst.model,
        "n": inst.n,
        "A": repr(inst.spec.A),
        "seed": inst.seed,
        "lambda": repr(inst.lam),
        "noise": "masked" if inst.mask is not None else "additive",
    }
    if inst.model == "toeplitz":
        np.savetxt(os.path.join(dirpath, "theta.txt"), inst.spec.theta, fmt=_FMT)
    else:
        meta["kernel"] = inst.spec.kind
        meta["width"] = repr(inst.spec.width)
    save_meta(os.path.join(dirpath, "meta"), meta)


def load_instance(dirpath: str) -> ModelInstance:
    meta = load_meta(os.path.join(dirpath, "meta"))
    X = load_matrix(os.path.join(dirpath, "X.csv"))
    Y = load_matrix(os.path.join(dirpath, "Y.csv"))
    pi_star = load_permutation(os.path.join(dirpath, "pi_star.txt"))
    mask_path = os.path.join(dirpath, "B.csv")
    mask = load_matrix(mask_path) if os.path.exists(mask_path) else None
    v_path = os.path.join(dirpath, "V.txt")
    V = np.loadtxt(v_path) if os.path.exists(v_path) else None
    A = float(meta["A"])
    if meta["model"] == "toeplitz":
        theta = np.loadtxt(os.path.join(dirpath, "theta.txt"))
        spec = ToeplitzSpec(theta=theta, A=A)
    else:
        spec = LatentSpec(kind=meta.get("kernel", "box"), A=A, n=X.shape[0],
                          width=float(meta.get("width", 0.1)))
    return ModelInstance(X=X, Y=Y, pi_star=pi_star, spec=spec,
                         seed=int(meta["seed"]), model=meta["model"], V=V,
                         mask=mask, lam=float(meta.get("lambda", 1.0)))
