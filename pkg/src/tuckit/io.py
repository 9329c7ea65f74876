"""Tensor serialization and seeded synthetic data.

File format (extension ``.dnt``), little-endian regardless of host:

    bytes 0..3   magic ``DNT1``
    bytes 4..7   mode count N, unsigned 32-bit
    next 8*N     shape, N unsigned 64-bit integers
    payload      prod(shape) float64 values, generalized column-major
                 (first mode index varies fastest)

Write-then-read round trips are bit-exact.  No compression.
"""

import hashlib
import struct

import numpy as np

from .kernels import qr_orthonormalize
from .tensor import multi_mode_multiply
from .validation import check_ranks, check_tensor

MAGIC = b"DNT1"

# Reject shapes whose element count cannot be sensible payload (guards
# against allocating from a corrupt header).
_MAX_ELEMENTS = 2**48


def tensor_to_bytes(x):
    """Serialize a tensor to the binary format; inverse of `tensor_from_bytes`."""
    x = check_tensor(x)
    header = MAGIC + struct.pack("<I", x.ndim)
    header += struct.pack(f"<{x.ndim}Q", *x.shape)
    payload = np.asarray(x, dtype="<f8").flatten(order="F").tobytes()
    return header + payload


def tensor_from_bytes(data):
    """Parse a tensor from bytes, validating magic, shape, and finiteness."""
    if len(data) < 8 or data[:4] != MAGIC:
        raise ValueError("bad magic: not a DNT1 tensor file")
    (ndim,) = struct.unpack_from("<I", data, 4)
    if ndim < 1 or ndim > 255:
        raise ValueError(f"shape overflow: implausible mode count {ndim}")
    header_end = 8 + 8 * ndim
    if len(data) < header_end:
        raise ValueError("truncated payload: incomplete shape header")
    shape = struct.unpack_from(f"<{ndim}Q", data, 8)
    if any(s < 1 for s in shape):
        raise ValueError(f"invalid shape {shape}: all mode sizes must be >= 1")
    count = 1
    for s in shape:
        count *= s
        if count > _MAX_ELEMENTS:
            raise ValueError(f"shape overflow: {shape} exceeds element limit")
    expected = header_end + 8 * count
    if len(data) < expected:
        raise ValueError(
            f"truncated payload: expected {expected} bytes, got {len(data)}"
        )
    if len(data) > expected:
        raise ValueError(
            f"trailing bytes: expected {expected} bytes, got {len(data)}"
        )
    flat = np.frombuffer(data, dtype="<f8", count=count, offset=header_end)
    if not np.all(np.isfinite(flat)):
        raise ValueError("payload contains NaN or Inf")
    return flat.reshape(shape, order="F").copy()


def write_tensor(x, sink):
    """Write a tensor to a path or binary file object."""
    data = tensor_to_bytes(x)
    if hasattr(sink, "write"):
        sink.write(data)
    else:
        with open(sink, "wb") as fh:
            fh.write(data)


def read_tensor(source):
    """Read a tensor from a path or binary file object."""
    if hasattr(source, "read"):
        data = source.read()
    else:
        with open(source, "rb") as fh:
            data = fh.read()
    return tensor_from_bytes(data)


def tensor_digest(x):
    """Hex SHA-256 of the serialized tensor; stable identifier for traces."""
    return hashlib.sha256(tensor_to_bytes(x)).hexdigest()


def gen_synthetic(shape, ranks, noise_level, seed):
    """Seeded random tensor with planted multilinear rank plus optional noise.

    Draws a core of size `ranks` and per-mode orthonormal factors from a
    seeded generator (standard normal entries, factors orthonormalized
    by QR), expands the product, then adds dense Gaussian noise scaled
    so that ``||noise||_F = noise_level * ||signal||_F``.  Deterministic
    per seed.

    Parameters
    ----------
    shape : sequence of int
    ranks : sequence of int
        Elementwise at most `shape`.
    noise_level : float
        Relative Frobenius noise level, >= 0.  Zero gives a tensor of
        exact multilinear rank at most `ranks`.
    seed : int

    Returns
    -------
    ndarray of shape `shape`
    """
    shape = tuple(int(s) for s in shape)
    ranks = check_ranks(ranks, shape)
    noise_level = float(noise_level)
    if noise_level < 0:
        raise ValueError("noise_level must be >= 0")
    rng = np.random.default_rng(seed)
    core = rng.standard_normal(ranks)
    factors = [qr_orthonormalize(rng.standard_normal((dim, r)))
               for dim, r in zip(shape, ranks)]
    signal = multi_mode_multiply(core, [(f, n) for n, f in enumerate(factors)])
    if noise_level == 0.0:
        return signal
    noise = rng.standard_normal(shape)
    noise_norm = np.linalg.norm(noise.ravel())
    if noise_norm == 0.0:
        return signal
    scale = noise_level * np.linalg.norm(signal.ravel()) / noise_norm
    return signal + scale * noise
