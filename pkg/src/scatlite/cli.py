"""Command-line surface: scatter, reconstruct, framecheck, blob, stability.

Exit codes: 0 success, 2 usage error, 3 computation error.  All commands are
deterministic under --seed.  Batch inputs (globs) are processed by a worker
pool whose size is capped by the SCATLITE_THREADS environment variable.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import glob
import json
import math
import os
import sys

import numpy as np

from .filterbank import (FilterBank, FilterBankConfig, Family,
                         build_filter_bank, littlewood_paley)
from .io import load_image, load_tensor, save_image, save_tensor
from .oracles import (BlobSpec, analytic_blob_scatter, blob_signal,
                      translation_bound_check)
from .reconstruct import (Init, ReconstructionConfig, psnr, reconstruct,
                          relative_err)
from .transform import (LAYOUT, ScatteringCoeffs, coefficient_count, scatter,
                        _workers)

__all__ = ["main"]


def _add_bank_flags(p: argparse.ArgumentParser, family_default: str) -> None:
    p.add_argument("--N", type=int, default=224, help="grid size (default 224)")
    p.add_argument("--J", type=int, default=3, help="largest scale exponent (default 3)")
    p.add_argument("--angles", type=int, default=8, help="orientations (default 8)")
    p.add_argument("--sigma0", type=float, default=FilterBankConfig.sigma0)
    p.add_argument("--xi0", type=float, default=FilterBankConfig.xi0)
    p.add_argument("--slant", type=float, default=FilterBankConfig.slant)
    p.add_argument("--family", choices=["gabor", "morlet"], default=family_default)


def _config_from_args(args) -> FilterBankConfig:
    return FilterBankConfig(
        grid_size=args.N, scale_J=args.J, num_angles=args.angles,
        sigma0=args.sigma0, xi0=args.xi0, slant=args.slant,
        family=Family(args.family),
    )


def _config_dict(cfg: FilterBankConfig) -> dict:
    d = dataclasses.asdict(cfg)
    d["family"] = cfg.family.value
    return d


def _config_from_dict(d: dict) -> FilterBankConfig:
    d = dict(d)
    d["family"] = Family(d["family"])
    return FilterBankConfig(**d)


# ----------------------------------------------------------------- scatter

def _scatter_one(path: str, out_path: str, bank: FilterBank) -> dict:
    cfg = bank.config
    x = load_image(path, cfg.grid_size)
    coeffs = scatter(x, bank)
    save_tensor(coeffs.data.astype(np.float32), out_path)

    channels = x.shape[0]
    count = coefficient_count(cfg) * channels
    ratio = count / (cfg.grid_size**2 * channels)
    sidecar = {
        "input": path,
        "config": _config_dict(cfg),
        "config_hash": coeffs.config_hash,
        "layout": coeffs.layout,
        "shape": list(coeffs.data.shape),
        "input_channels": channels,
        "coefficient_count": count,
        "compression_ratio": ratio,
        "expansion": ratio > 1.0,
    }
    with open(out_path + ".json", "w") as f:
        json.dump(sidecar, f, indent=2)
    return sidecar


def cmd_scatter(args) -> int:
    paths = sorted(glob.glob(args.input)) or (
        [args.input] if os.path.exists(args.input) else [])
    if not paths:
        print(f"error: no input matches {args.input!r}", file=sys.stderr)
        return 3
    bank = build_filter_bank(_config_from_args(args))

    if len(paths) == 1:
        info = _scatter_one(paths[0], args.out, bank)
        print(f"{paths[0]} -> {args.out}  shape={info['shape']} "
              f"ratio={info['compression_ratio']:.4f}"
              + ("  [expansion]" if info["expansion"] else ""))
        return 0

    if not os.path.isdir(args.out):
        print("error: --out must be a directory for multi-file input",
              file=sys.stderr)
        return 3
    failures = []
    def run(p):
        stem = os.path.splitext(os.path.basename(p))[0]
        return p, _scatter_one(p, os.path.join(args.out, stem + ".sct1"), bank)
    with concurrent.futures.ThreadPoolExecutor(max_workers=_workers()) as pool:
        for fut in [pool.submit(run, p) for p in paths]:
            try:
                p, info = fut.result()
                print(f"{p}  shape={info['shape']} "
                      f"ratio={info['compression_ratio']:.4f}")
            except Exception as e:  # per-file isolation
                failures.append(str(e))
                print(f"error: {e}", file=sys.stderr)
    return 3 if failures else 0


# ------------------------------------------------------------- reconstruct

def cmd_reconstruct(args) -> int:
    sidecar_path = args.coeffs + ".json"
    if args.config is not None:
        sidecar_path = args.config
    if os.path.exists(sidecar_path):
        with open(sidecar_path) as f:
            meta = json.load(f)
        cfg = _config_from_dict(meta["config"])
    else:
        cfg = _config_from_args(args)
    bank = build_filter_bank(cfg)

    data = load_tensor(args.coeffs).astype(np.float64)
    target = ScatteringCoeffs(data=data, config_hash=bank.config_hash())

    init_img = None
    if args.init_image is not None:
        init_img = load_image(args.init_image, cfg.grid_size)
    rcfg = ReconstructionConfig(
        max_iters=args.iters, initial_lr=args.lr,
        lr_drop_every=args.drop_every, lr_drop_factor=args.drop_factor,
        target_err=args.target_err, init=Init(args.init), seed=args.seed,
        init_image=init_img,
    )
    trace = reconstruct(target, bank, rcfg)
    final = np.clip(trace.final_image, 0.0, 1.0)
    save_image(final, args.out)

    report = {
        "coeffs": args.coeffs,
        "config": _config_dict(cfg),
        "reconstruction": {k: (v.value if isinstance(v, Init) else v)
                           for k, v in dataclasses.asdict(rcfg).items()
                           if k != "init_image"},
        "seed": trace.seed,
        "iterations_run": trace.iterations_run,
        "diverged": trace.diverged,
        "final_err": trace.err_history[-1] if trace.err_history else None,
        "best_err": min(trace.err_history) if trace.err_history else None,
        "err_history": trace.err_history,
        "loss_history": trace.loss_history,
    }
    print(f"err_J = {report['best_err']:.4e}  iterations = {trace.iterations_run}"
          + ("  [diverged]" if trace.diverged else ""))
    if args.reference is not None:
        ref = load_image(args.reference, cfg.grid_size)
        report["psnr_db"] = psnr(final, ref)
        report["reference_err"] = relative_err(final, ref, bank)
        print(f"PSNR = {report['psnr_db']:.2f} dB (vs {args.reference})")
    with open(args.out + ".json", "w") as f:
        json.dump(report, f, indent=2)
    return 0


# -------------------------------------------------------------- framecheck

def cmd_framecheck(args) -> int:
    bank = build_filter_bank(_config_from_args(args))
    rep = littlewood_paley(bank)
    print(f"grid N = {bank.config.grid_size}, J = {bank.config.scale_J}, "
          f"angles = {bank.config.num_angles}, family = {bank.config.family.value}")
    print(f"conjugate-inclusive: epsilon0 = {rep.epsilon0:.6f}  "
          f"energy in [{rep.min_energy:.6f}, {rep.max_energy:.6f}]")
    print(f"single-sided:        epsilon0 = {rep.epsilon0_single_sided:.6f}  "
          f"energy in [{rep.min_energy_single_sided:.6f}, "
          f"{rep.max_energy_single_sided:.6f}]")
    print(f"bandpass_scale c = {bank.bandpass_scale:.6f}")
    return 0


# -------------------------------------------------------------------- blob

def _montage(channels: np.ndarray, cols: int) -> np.ndarray:
    """Tile per-channel-normalized maps into a grid image."""
    k, n = channels.shape[0], channels.shape[-1]
    rows = math.ceil(k / cols)
    out = np.zeros((rows * n, cols * n))
    for i in range(k):
        c = channels[i]
        lo, hi = float(c.min()), float(c.max())
        r, q = divmod(i, cols)
        out[r * n:(r + 1) * n, q * n:(q + 1) * n] = (
            (c - lo) / (hi - lo) if hi > lo else 0.5)
    return out


def cmd_blob(args) -> int:
    s11, s12, s22 = args.sigma
    spec = BlobSpec(sigma_matrix=np.array([[s11, s12], [s12, s22]]),
                    grid_size=args.N)
    bank = build_filter_bank(_config_from_args(args))
    x = blob_signal(spec)
    numeric = scatter(x, bank)
    analytic = analytic_blob_scatter(spec, bank)

    cos = []
    for i in range(numeric.data.shape[0]):
        a, b = numeric.data[i].ravel(), analytic.data[i].ravel()
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        cos.append(float(a @ b / (na * nb)) if na > 0 and nb > 0 else float("nan"))
    L = bank.config.num_angles
    print("channel  j  theta_idx  cosine")
    print(f"{0:7d}  -  low-pass   {cos[0]:+.6f}")
    for i in range(1, len(cos)):
        j, l = divmod(i - 1, L)
        print(f"{i:7d}  {j}  {l:9d}  {cos[i]:+.6f}")
    print(f"min cosine = {min(cos):.6f}")

    os.makedirs(args.out_dir, exist_ok=True)
    save_image(x, os.path.join(args.out_dir, "blob.png"))
    save_tensor(numeric.data.astype(np.float32),
                os.path.join(args.out_dir, "numeric.sct1"))
    save_tensor(analytic.data.astype(np.float32),
                os.path.join(args.out_dir, "analytic.sct1"))
    save_image(_montage(numeric.data, L),
               os.path.join(args.out_dir, "numeric.png"))
    save_image(_montage(analytic.data, L),
               os.path.join(args.out_dir, "analytic.png"))
    with open(os.path.join(args.out_dir, "blob.json"), "w") as f:
        json.dump({"sigma": [s11, s12, s22], "config": _config_dict(bank.config),
                   "cosine_similarities": cos, "min_cosine": min(cos)}, f, indent=2)
    return 0


# --------------------------------------------------------------- stability

def cmd_stability(args) -> int:
    bank = build_filter_bank(_config_from_args(args))
    cfg = bank.config
    rng = np.random.default_rng(args.seed)

    feasible = []
    probe = np.zeros((cfg.grid_size, cfg.grid_size))
    for j in range(cfg.scale_J):
        try:
            translation_bound_check(probe, (0.0, 0.0), bank, j, 0, args.tail_eps)
            feasible.append(j)
        except ValueError:
            pass
    if not feasible:
        print(f"error: no scale admits a tail radius below pi at "
              f"tail_eps={args.tail_eps}", file=sys.stderr)
        return 3

    rows = []
    violations = 0
    for i in range(args.trials):
        x = rng.standard_normal((cfg.grid_size, cfg.grid_size))
        a = args.amax * (2.0 * rng.random(2) - 1.0)
        j = int(rng.choice(feasible))
        theta = int(rng.integers(cfg.num_angles))
        rep = translation_bound_check(x, a, bank, j, theta, args.tail_eps)
        row = {"trial": i, "j": j, "theta_index": theta,
               "norm_a": float(np.hypot(*a)), "lhs": rep.lhs, "rhs": rep.rhs,
               "eta0": rep.eta0, "epsilon": rep.epsilon, "holds": rep.holds}
        rows.append(row)
        violations += not rep.holds
        print(json.dumps(row))
    print(f"# {args.trials} trials, scales {feasible}, violations = {violations}",
          file=sys.stderr)
    if args.out is not None:
        with open(args.out, "w") as f:
            json.dump(rows, f, indent=2)
    return 0 if violations == 0 else 3


# -------------------------------------------------------------------- main

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="scatlite",
        description="First-order scattering transform: filter banks, "
                    "coefficients, and gradient-descent inversion.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scatter", help="scatter PNG image(s) to coefficients")
    p.add_argument("--input", required=True, help="input PNG path or glob")
    p.add_argument("--out", required=True,
                   help="output tensor path (or directory for globs)")
    _add_bank_flags(p, "morlet")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("reconstruct", help="invert coefficients by gradient descent")
    p.add_argument("--coeffs", required=True, help="input tensor path")
    p.add_argument("--out", required=True, help="output PNG path")
    p.add_argument("--config", default=None,
                   help="sidecar JSON path (default: <coeffs>.json if present)")
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--lr", type=float, default=10.0)
    p.add_argument("--drop-every", type=int, default=200)
    p.add_argument("--drop-factor", type=float, default=0.1)
    p.add_argument("--target-err", type=float, default=2e-3)
    p.add_argument("--init", choices=[i.value for i in Init],
                   default=Init.UNIFORM_NOISE.value)
    p.add_argument("--init-image", default=None, help="PNG used by provided-image init")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reference", default=None,
                   help="ground-truth PNG; enables PSNR reporting")
    _add_bank_flags(p, "morlet")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("framecheck", help="Littlewood-Paley frame audit")
    _add_bank_flags(p, "morlet")
    p.set_defaults(func=cmd_framecheck)

    p = sub.add_parser("blob", help="numeric vs analytic Gaussian-blob scattering")
    p.add_argument("--sigma", type=float, nargs=3, metavar=("S11", "S12", "S22"),
                   default=[4.0, 0.0, 9.0], help="spectral covariance entries")
    p.add_argument("--out-dir", default="blob-out")
    _add_bank_flags(p, "gabor")
    p.set_defaults(func=cmd_blob)

    p = sub.add_parser("stability", help="translation-stability bound trials")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--amax", type=float, default=4.0,
                   help="per-coordinate max |a| (default 4)")
    p.add_argument("--tail-eps", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="optional JSON output path")
    _add_bank_flags(p, "gabor")
    p.set_defaults(func=cmd_stability)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
