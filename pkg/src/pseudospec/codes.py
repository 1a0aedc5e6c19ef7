"""Primitive narrow-sense binary BCH codes and their duals.

A code of length n = 2^m - 1 with designed distance delta is generated by
the least common multiple of the minimal polynomials of alpha, alpha^2,
..., alpha^(delta-1).  The dual code is cyclic as well, generated by the
reciprocal of h(x) = (x^n + 1) / g(x); sampling uniform messages and
multiplying by that generator induces the uniform measure on dual
codewords, which is what the matrix ensembles downstream consume.

Codewords are GF(2) polynomials in the integer representation of
:mod:`.gf2m` (bit i = coefficient of x^i).  ``words_to_bits`` converts a
batch to a dense 0/1 array for packing into matrices.

Batch file format (``save_codewords``): an 8-byte header of two uint32
little-endian fields (n, count), then ``count`` records of ceil(n/8) bytes
each, coefficient of x^0 first (bit j of byte i is the coefficient of
x^(8i+j)).
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from . import gf2m
from .errors import (
    ArithmeticCorruptionError,
    DegenerateCodeError,
    InvalidInputError,
    ResourceLimitError,
)

# Exhaustive enumerations (distance, exact independence) stop at 2^24 words.
ENUMERATION_BUDGET_BITS = 24


@dataclass(frozen=True)
class CyclicCode:
    """Cyclic code of length n = 2^m - 1 with generator g(x)."""

    field: gf2m.FieldParams
    generator: int
    delta: int | None = None

    def __post_init__(self) -> None:
        q, r = gf2m.poly_divmod((1 << self.n) | 1, self.generator)
        if r != 0:
            raise InvalidInputError("generator does not divide x^n + 1")
        if self.k < 1:
            raise DegenerateCodeError("code has dimension 0")
        # cofactor h(x) = (x^n + 1) / g(x), reused by dual_code; the division
        # is linear in n but n can be ~10^6, so do it once
        object.__setattr__(self, "_cofactor", q)

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def k(self) -> int:
        return self.n - gf2m.degree(self.generator)

    # alias so distance/independence helpers can treat base and dual alike
    @property
    def dimension(self) -> int:
        return self.k

    def to_json_dict(self) -> dict:
        return {
            "m": self.field.m,
            "n": self.n,
            "delta": self.delta,
            "generator_hex": gf2m.poly_to_hex(self.generator),
            "k": self.k,
        }


@dataclass(frozen=True)
class DualCode:
    """Dual of a cyclic code, itself cyclic with the reciprocal-h generator."""

    base: CyclicCode
    generator: int
    k_dual: int

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def dimension(self) -> int:
        return self.k_dual

    def to_json_dict(self) -> dict:
        d = self.base.to_json_dict()
        d["dual_generator_hex"] = gf2m.poly_to_hex(self.generator)
        d["k_dual"] = self.k_dual
        return d


def bch_generator(
    m: int, delta: int, params: gf2m.FieldParams | None = None
) -> CyclicCode:
    """Construct the BCH code of length 2^m - 1 and designed distance delta.

    An even delta is promoted to delta + 1 (with a warning): the conjugacy
    class of alpha^(delta/2) already contains alpha^delta, so both choices
    generate the same code.  If the requested roots exhaust x^n + 1 the
    code collapses and a DegenerateCodeError is raised.
    """
    if params is None:
        params = gf2m.FieldParams.default(m)
    elif params.m != m:
        raise InvalidInputError(f"params are for m={params.m}, not m={m}")
    if delta < 3:
        raise InvalidInputError(f"designed distance must be >= 3, got {delta}")
    if delta % 2 == 0:
        warnings.warn(
            f"even designed distance {delta} promoted to {delta + 1} "
            "(same code by conjugacy)",
            stacklevel=2,
        )
        delta += 1

    n = params.n
    reps_seen: set[int] = set()
    g = 1
    for e in range(1, delta):
        e_mod = e % n
        rep = min(gf2m.cyclotomic_coset(e_mod, n)) if n > 1 else 0
        if rep in reps_seen:
            continue
        reps_seen.add(rep)
        g = gf2m.poly_mul(g, gf2m.minimal_polynomial(e_mod, params))

    if gf2m.degree(g) >= n:
        raise DegenerateCodeError(
            f"designed distance {delta} leaves no code at n={n}"
        )
    code = CyclicCode(field=params, generator=g, delta=delta)
    if delta <= n:
        t = (delta - 1) // 2
        if code.k < n - m * t:
            raise ArithmeticCorruptionError(
                f"dimension {code.k} below the n - m*t = {n - m * t} bound"
            )
    return code


def delta_for_dimension(m: int, k: int) -> int:
    """Smallest designed distance whose BCH code has dimension exactly k.

    Walks odd designed distances upward (dimension is non-increasing in
    delta) until the target dimension is hit; raises if it is skipped over,
    since not every k is a BCH dimension.
    """
    params = gf2m.FieldParams.default(m)
    n = params.n
    if not 1 <= k < n:
        raise InvalidInputError(f"target dimension {k} outside [1, {n})")
    deg = 0
    reps_seen: set[int] = set()
    delta = 3
    while True:
        for e in (delta - 2, delta - 1):
            rep = min(gf2m.cyclotomic_coset(e % n, n))
            if rep not in reps_seen:
                reps_seen.add(rep)
                deg += len(gf2m.cyclotomic_coset(rep, n))
        if n - deg == k:
            return delta
        if n - deg < k:
            raise InvalidInputError(
                f"no BCH code of length {n} has dimension {k} "
                f"(nearest from above has k={n - deg} at delta={delta})"
            )
        delta += 2


def dual_code(code: CyclicCode) -> DualCode:
    """Dual of a cyclic code: generator = reciprocal of (x^n + 1) / g(x)."""
    h = getattr(code, "_cofactor", None)
    if h is None:
        h, r = gf2m.poly_divmod((1 << code.n) | 1, code.generator)
        if r != 0:
            raise ArithmeticCorruptionError("x^n + 1 not divisible by generator")
    if gf2m.poly_mul(h, code.generator) != (1 << code.n) | 1:
        raise ArithmeticCorruptionError("cofactor does not multiply back to x^n + 1")
    k_dual = code.n - code.k
    if k_dual < 1:
        raise DegenerateCodeError("dual of the full space has dimension 0")
    return DualCode(base=code, generator=gf2m.reciprocal(h), k_dual=k_dual)


def encode(dual: DualCode, message: int) -> int:
    """Nonsystematic encoding: codeword = message(x) * generator(x).

    The product degree stays below n, so no reduction modulo x^n + 1 is
    needed; linearity and injectivity are immediate.
    """
    if not 0 <= message < (1 << dual.k_dual):
        raise InvalidInputError(
            f"message must fit in k_dual = {dual.k_dual} bits"
        )
    word = gf2m.poly_mul(message, dual.generator)
    if word.bit_length() > dual.n:
        raise ArithmeticCorruptionError("codeword overflow past x^(n-1)")
    return word


def message_for_index(k_bits: int, seed: int, index: int) -> int:
    """Uniform k-bit message derived deterministically from (seed, index).

    Every index owns an independent generator stream, so any prefix,
    subset, or parallel split of a batch reproduces identical messages.
    """
    rng = np.random.default_rng((int(seed), int(index)))
    bits = rng.integers(0, 2, size=k_bits, dtype=np.uint8)
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def iter_codewords(dual: DualCode, count: int, seed: int) -> Iterator[int]:
    """Lazily yield `count` seeded-uniform dual codewords."""
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    for i in range(count):
        yield encode(dual, message_for_index(dual.k_dual, seed, i))


def sample_codewords(dual: DualCode, count: int, seed: int) -> list[int]:
    """Materialized version of iter_codewords."""
    return list(iter_codewords(dual, count, seed))


def min_distance_exact(code: Union[CyclicCode, DualCode]) -> int:
    """Minimum Hamming weight over all nonzero codewords, by enumeration.

    Walks messages in Gray-code order so each step is a single XOR with a
    shifted generator.  Refuses dimensions above the enumeration budget;
    callers should fall back to the designed distance there.
    """
    k = code.dimension
    if k > ENUMERATION_BUDGET_BITS:
        raise ResourceLimitError(
            f"dimension {k} exceeds the 2^{ENUMERATION_BUDGET_BITS} "
            "enumeration budget; use the designed distance instead"
        )
    basis = [code.generator << j for j in range(k)]
    word = 0
    best = code.n + 1
    for i in range(1, 1 << k):
        word ^= basis[(i & -i).bit_length() - 1]
        w = word.bit_count()
        if w < best:
            best = w
    return best


def enumerate_codewords(code: Union[CyclicCode, DualCode]) -> list[int]:
    """All 2^k codewords (message order), for small-dimension oracles."""
    k = code.dimension
    if k > ENUMERATION_BUDGET_BITS:
        raise ResourceLimitError(f"2^{k} codewords exceed the enumeration budget")
    return [
        _encode_any(code, msg) for msg in range(1 << k)
    ]


def _encode_any(code: Union[CyclicCode, DualCode], message: int) -> int:
    return gf2m.poly_mul(message, code.generator)


def generator_matrix(code: Union[CyclicCode, DualCode]) -> np.ndarray:
    """k x n basis matrix over GF(2); row j is x^j * g(x)."""
    k, n = code.dimension, code.n
    rows = np.zeros((k, n), dtype=np.uint8)
    g_bits = word_to_bits(code.generator, n)
    deg = gf2m.degree(code.generator)
    for j in range(k):
        rows[j, j : j + deg + 1] = g_bits[: deg + 1]
    return rows


def word_to_bits(word: int, n: int) -> np.ndarray:
    """0/1 array of length n, coefficient of x^0 first."""
    nbytes = (n + 7) // 8
    raw = np.frombuffer(word.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def words_to_bits(words: list[int], n: int) -> np.ndarray:
    """(len(words), n) 0/1 array, coefficient of x^0 first in each row."""
    nbytes = (n + 7) // 8
    buf = b"".join(w.to_bytes(nbytes, "little") for w in words)
    raw = np.frombuffer(buf, dtype=np.uint8).reshape(len(words), nbytes)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :n]


def save_codewords(path, words: list[int], n: int) -> None:
    """Write a codeword batch in the packed binary format (see module doc)."""
    nbytes = (n + 7) // 8
    with open(path, "wb") as fh:
        fh.write(struct.pack("<II", n, len(words)))
        for w in words:
            fh.write(w.to_bytes(nbytes, "little"))


def load_codewords(path) -> tuple[int, list[int]]:
    """Read a codeword batch; returns (n, words)."""
    with open(path, "rb") as fh:
        n, count = struct.unpack("<II", fh.read(8))
        nbytes = (n + 7) // 8
        words = [
            int.from_bytes(fh.read(nbytes), "little") for _ in range(count)
        ]
    return n, words
