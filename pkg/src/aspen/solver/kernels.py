"""Interpretation-sweep kernels: njit-compiled and pure-numpy backends.

Both backends take the same inputs — per-rule head/positive/negative bitmask
arrays, a mask of forced fact atoms, and the bit positions that vary — and
return the interpretation masks that are stable models, in ascending order.
Atom counts are capped well below 63 so masks fit in signed 64-bit integers.

Backend selection: the ``ASPEN_KERNEL`` environment variable ("numba" or
"numpy") wins; otherwise numba is used when importable, numpy if not.
Requesting numba without it installed is an error rather than a silent
downgrade.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency, but the
    HAS_NUMBA = False  # numpy path must survive without it

ENV_FLAG = "ASPEN_KERNEL"
BACKENDS = ("numba", "numpy")


class KernelUnavailable(RuntimeError):
    pass


def default_backend() -> str:
    choice = os.environ.get(ENV_FLAG, "").strip().lower()
    if choice:
        if choice not in BACKENDS:
            raise KernelUnavailable(
                f"{ENV_FLAG}={choice!r} is not a backend (choose from {', '.join(BACKENDS)})"
            )
        if choice == "numba" and not HAS_NUMBA:
            raise KernelUnavailable("numba backend requested but numba is not importable")
        return choice
    return "numba" if HAS_NUMBA else "numpy"


def _scatter_masks_np(selectors: np.ndarray, facts_mask: int, free_bits: np.ndarray) -> np.ndarray:
    masks = np.full(selectors.shape, facts_mask, dtype=np.int64)
    for k in range(free_bits.shape[0]):
        masks |= ((selectors >> k) & 1) << np.int64(free_bits[k])
    return masks


def enumerate_stable_numpy(
    head: np.ndarray, pos: np.ndarray, neg: np.ndarray, facts_mask: int, free_bits: np.ndarray
) -> np.ndarray:
    """Vectorized model filter, then a vectorized submask sweep per candidate."""
    n_free = int(free_bits.shape[0])
    selectors = np.arange(1 << n_free, dtype=np.int64)
    masks = _scatter_masks_np(selectors, facts_mask, free_bits)

    ok = np.ones(masks.shape, dtype=bool)
    for r in range(head.shape[0]):
        violated = ((masks & pos[r]) == pos[r]) & ((masks & neg[r]) == 0) & ((masks & head[r]) == 0)
        ok &= ~violated

    free_all = 0
    for b in free_bits.tolist():
        free_all |= 1 << int(b)

    stable: list[int] = []
    for I in masks[ok].tolist():
        m = I & free_all
        if m == 0:
            stable.append(I)
            continue
        reduct = [r for r in range(head.shape[0]) if (I & int(neg[r])) == 0]
        subs = _submasks_np(m)
        J = subs | np.int64(facts_mask)
        models_reduct = np.ones(J.shape, dtype=bool)
        for r in reduct:
            models_reduct &= ~(((J & pos[r]) == pos[r]) & ((J & head[r]) == 0))
        if not models_reduct.any():
            stable.append(I)
    return np.array(sorted(stable), dtype=np.int64)


def _submasks_np(m: int) -> np.ndarray:
    """All proper submasks of m (m itself excluded), as an int64 array."""
    bits = [k for k in range(63) if (m >> k) & 1]
    selectors = np.arange(1 << len(bits), dtype=np.int64)[:-1]  # drop full mask
    out = np.zeros(selectors.shape, dtype=np.int64)
    for k, b in enumerate(bits):
        out |= ((selectors >> k) & 1) << np.int64(b)
    return out


def _enumerate_stable_py(head, pos, neg, facts_mask, free_bits):  # pragma: no cover
    """Scalar reference of the kernel loop; the njit build compiles this."""
    n_rules = head.shape[0]
    n_free = free_bits.shape[0]
    total = 1 << n_free
    free_all = 0
    for k in range(n_free):
        free_all |= 1 << free_bits[k]
    flags = np.zeros(total, dtype=np.uint8)
    for s in range(total):
        I = facts_mask
        for k in range(n_free):
            if (s >> k) & 1:
                I |= 1 << free_bits[k]
        is_model = True
        for r in range(n_rules):
            if (I & pos[r]) == pos[r] and (I & neg[r]) == 0 and (I & head[r]) == 0:
                is_model = False
                break
        if not is_model:
            continue
        m = I & free_all
        stable = True
        if m != 0:
            sub = (m - 1) & m
            while True:
                J = facts_mask | sub
                models_reduct = True
                for r in range(n_rules):
                    if (I & neg[r]) != 0:
                        continue
                    if (J & pos[r]) == pos[r] and (J & head[r]) == 0:
                        models_reduct = False
                        break
                if models_reduct:
                    stable = False
                    break
                if sub == 0:
                    break
                sub = (sub - 1) & m
        if stable:
            flags[s] = 1
    return flags


if HAS_NUMBA:
    _enumerate_stable_nb = njit(cache=True)(_enumerate_stable_py)


def enumerate_stable_numba(
    head: np.ndarray, pos: np.ndarray, neg: np.ndarray, facts_mask: int, free_bits: np.ndarray
) -> np.ndarray:
    if not HAS_NUMBA:
        raise KernelUnavailable("numba is not importable")
    flags = _enumerate_stable_nb(head, pos, neg, np.int64(facts_mask), free_bits)
    selectors = np.nonzero(flags)[0].astype(np.int64)
    return np.sort(_scatter_masks_np(selectors, facts_mask, free_bits))


def enumerate_stable(
    head: np.ndarray,
    pos: np.ndarray,
    neg: np.ndarray,
    facts_mask: int,
    free_bits: np.ndarray,
    backend: str | None = None,
) -> np.ndarray:
    """Stable-model masks of the rule arrays, via the selected backend."""
    chosen = backend or default_backend()
    if chosen == "numba":
        if not HAS_NUMBA:
            raise KernelUnavailable("numba backend requested but numba is not importable")
        return enumerate_stable_numba(head, pos, neg, facts_mask, free_bits)
    if chosen == "numpy":
        return enumerate_stable_numpy(head, pos, neg, facts_mask, free_bits)
    raise KernelUnavailable(f"unknown backend {chosen!r}")
