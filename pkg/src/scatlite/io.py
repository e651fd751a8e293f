"""Image and tensor persistence.

Tensor files use a small fixed binary layout ("SCT1") so regression
baselines are bit-stable across machines:

    magic   4 bytes  b"SCT1"
    version u16 LE   currently 1
    dtype   u8       0 = float32, 1 = float64
    rank    u8
    dims    rank x u32 LE
    payload row-major little-endian
    crc32   u32 LE   CRC-32 of the payload bytes

Writes go through a temp file and an atomic rename.  PNG images load as
float64 channel-first tensors scaled to [0, 1]; resizing uses a bilinear
kernel with half-pixel-aligned sample centers after a center crop to square.
"""
from __future__ import annotations

import os
import struct
import tempfile
import zlib

import numpy as np
from PIL import Image

__all__ = [
    "save_tensor",
    "load_tensor",
    "load_image",
    "save_image",
    "bilinear_resize",
    "center_crop",
]

MAGIC = b"SCT1"
VERSION = 1
MAX_ELEMENTS = 1 << 32  # product(dims) above this is rejected

_DTYPE_CODES = {np.dtype("<f4"): 0, np.dtype("<f8"): 1}
_CODE_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("<f8")}


def save_tensor(t: np.ndarray, path) -> None:
    """Write a float32/float64 tensor; atomic (temp file + rename)."""
    arr = np.asarray(t)
    if arr.dtype not in (np.float32, np.float64):
        raise ValueError(f"only float32/float64 tensors are stored, got {arr.dtype}")
    if arr.ndim < 1 or arr.ndim > 255:
        raise ValueError(f"rank {arr.ndim} out of range [1, 255]")
    if any(d >= 1 << 32 for d in arr.shape) or arr.size > MAX_ELEMENTS:
        raise ValueError(f"dims overflow: product(dims) = {arr.size} > 2^32")

    arr = np.ascontiguousarray(arr)
    code = _DTYPE_CODES[np.dtype(arr.dtype).newbyteorder("<")]
    header = struct.pack("<4sHBB", MAGIC, VERSION, code, arr.ndim)
    header += struct.pack(f"<{arr.ndim}I", *arr.shape)
    payload = arr.astype(arr.dtype.newbyteorder("<"), copy=False).tobytes()

    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".sct1.tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(header)
            f.write(payload)
            f.write(struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_tensor(path) -> np.ndarray:
    """Read an SCT1 tensor; raises ValueError on any corruption."""
    with open(path, "rb") as f:
        buf = f.read()
    if len(buf) < 8:
        raise ValueError("truncated tensor file: header incomplete")
    magic, version, code, rank = struct.unpack_from("<4sHBB", buf, 0)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}, not an SCT1 file")
    if version != VERSION:
        raise ValueError(f"unsupported version {version}")
    if code not in _CODE_DTYPES:
        raise ValueError(f"unknown dtype code {code}")
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if len(buf) < 8 + 4 * rank:
        raise ValueError("truncated tensor file: dims incomplete")
    dims = struct.unpack_from(f"<{rank}I", buf, 8)
    count = int(np.prod(np.asarray(dims, dtype=np.uint64), dtype=np.uint64))
    if count > MAX_ELEMENTS:
        raise ValueError(f"dims overflow: product(dims) = {count} > 2^32")

    dtype = _CODE_DTYPES[code]
    start = 8 + 4 * rank
    end = start + count * dtype.itemsize
    if len(buf) != end + 4:
        raise ValueError(
            f"corrupt tensor file: expected {end + 4} bytes, found {len(buf)}"
        )
    payload = buf[start:end]
    (crc_stored,) = struct.unpack_from("<I", buf, end)
    if zlib.crc32(payload) & 0xFFFFFFFF != crc_stored:
        raise ValueError("corrupt tensor file: CRC mismatch")
    return np.frombuffer(payload, dtype=dtype).reshape(dims).copy()


def center_crop(img: np.ndarray) -> np.ndarray:
    """Crop the trailing two axes to a centered square."""
    h, w = img.shape[-2], img.shape[-1]
    s = min(h, w)
    top, left = (h - s) // 2, (w - s) // 2
    return img[..., top:top + s, left:left + s]


def bilinear_resize(img: np.ndarray, out_size: int) -> np.ndarray:
    """Bilinear resample of the trailing two axes to (out_size, out_size),
    sampling at half-pixel-aligned centers with edge clamping."""
    h, w = img.shape[-2], img.shape[-1]
    if (h, w) == (out_size, out_size):
        return np.array(img, dtype=np.float64)
    ys = (np.arange(out_size) + 0.5) * h / out_size - 0.5
    xs = (np.arange(out_size) + 0.5) * w / out_size - 0.5
    y0 = np.clip(np.floor(ys).astype(int), 0, h - 1)
    x0 = np.clip(np.floor(xs).astype(int), 0, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = np.clip(ys - y0, 0.0, 1.0)[:, None]
    fx = np.clip(xs - x0, 0.0, 1.0)[None, :]
    a = img[..., y0[:, None], x0[None, :]]
    b = img[..., y0[:, None], x1[None, :]]
    c = img[..., y1[:, None], x0[None, :]]
    d = img[..., y1[:, None], x1[None, :]]
    return (a * (1 - fy) * (1 - fx) + b * (1 - fy) * fx
            + c * fy * (1 - fx) + d * fy * fx)


def load_image(path, grid_size: int | None = None) -> np.ndarray:
    """Load an 8- or 16-bit PNG (grayscale or RGB) as (C, H, W) float64 in
    [0, 1].  When grid_size is given, center-crop to square and bilinearly
    resize to (C, grid_size, grid_size)."""
    with Image.open(path) as im:
        im.load()
        if im.mode == "RGBA":
            im = im.convert("RGB")
        elif im.mode == "LA":
            im = im.convert("L")
        elif im.mode == "P":
            im = im.convert("RGB")
        arr = np.asarray(im)

    if arr.dtype == np.uint8:
        x = arr.astype(np.float64) / 255.0
    elif arr.dtype == np.uint16 or arr.dtype == np.dtype(">u2"):
        x = arr.astype(np.float64) / 65535.0
    else:
        raise ValueError(f"unsupported bit depth / dtype {arr.dtype}")

    if x.ndim == 2:
        x = x[None]
    elif x.ndim == 3 and x.shape[-1] in (3, 4):
        x = np.moveaxis(x[..., :3], -1, 0)
    else:
        raise ValueError(f"unsupported image layout with shape {arr.shape}")

    if grid_size is not None:
        x = bilinear_resize(center_crop(x), grid_size)
    return x


def save_image(img: np.ndarray, path) -> None:
    """Save a (H, W), (1, H, W) or (3, H, W) float image in [0, 1] as an
    8-bit PNG; values are clipped at save time."""
    x = np.asarray(img, dtype=np.float64)
    if x.ndim == 3 and x.shape[0] == 1:
        x = x[0]
    elif x.ndim == 3 and x.shape[0] == 3:
        x = np.moveaxis(x, 0, -1)
    elif x.ndim != 2:
        raise ValueError(f"unsupported image shape {np.asarray(img).shape}")
    q = np.clip(np.rint(np.clip(x, 0.0, 1.0) * 255.0), 0, 255).astype(np.uint8)
    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".png.tmp")
    os.close(fd)
    try:
        Image.fromarray(q).save(tmp, format="PNG")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
