"""Primality, prime sampling, generators, DFT coefficient extraction and CRT."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, prod
from typing import Callable, Iterable

from .errors import InsufficientModuli, InvalidRoot, PreconditionError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# deterministic witness sets (Jaeschke; Sorenson-Webster)
_WITNESS_TABLE = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (1 << 64, _SMALL_PRIMES),
)
MR_ROUNDS = 64


def stream(seed, *names) -> random.Random:
    """Named random stream: independent generators derived from one seed.

    String seeds go through sha512, so every (seed, names) key gives a
    reproducible generator over arbitrary-precision integers.
    """
    key = "/".join([str(seed)] + [str(n) for n in names])
    return random.Random(key)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int, rounds: int = MR_ROUNDS) -> bool:
    """Miller-Rabin: deterministic below 2**64, ``rounds`` seeded bases above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        bases = next(b for bound, b in _WITNESS_TABLE if n < bound)
    else:
        rng = stream("miller-rabin", n)
        bases = [rng.randrange(2, n - 1) for _ in range(rounds)]
    return all(_strong_probable_prime(n, a, d, s) for a in bases)


@dataclass(frozen=True)
class PrimeSample:
    p: int
    M: int
    provenance: str


def sample_prime(M: int, rng) -> PrimeSample:
    """Uniform prime in [1, M] by rejection; ``rng`` is a random.Random or a seed."""
    if M < 2:
        raise PreconditionError(f"no prime in [1, {M}]")
    if not isinstance(rng, random.Random):
        rng = stream(rng, "prime", M)
    draws = 0
    while True:
        draws += 1
        x = rng.randint(1, M)
        if is_prime(x):
            return PrimeSample(x, M, f"rejection draw {draws}")


def factorize(n: int) -> dict[int, int]:
    """Trial division; fine for the p-1 values met at desk scale."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def find_generator(p: int) -> int:
    """Smallest generator of the multiplicative group mod p."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if p == 2:
        return 1
    qs = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable: every prime field has a generator")


def check_primitive_root(rho: int, N: int, p: int) -> None:
    if N < 1 or (rho % p) == 0 or pow(rho, N, p) != 1:
        raise InvalidRoot(f"{rho} is not an {N}-th root of unity mod {p}")
    for q in factorize(N):
        if pow(rho, N // q, p) == 1:
            raise InvalidRoot(f"{rho} has order dividing {N // q} mod {p}")


def root_of_unity(p: int, N: int | None = None) -> tuple[int, int]:
    """(rho, N) with rho a primitive N-th root mod p; N defaults to p - 1."""
    g = find_generator(p)
    if N is None or N == p - 1:
        return g, p - 1
    if (p - 1) % N:
        raise PreconditionError(f"{N} does not divide {p} - 1")
    return pow(g, (p - 1) // N, p), N


def dft_coefficient(eval_oracle: Callable[[int], int], rho: int, N: int, t: int, p: int) -> int:
    """c_t = N^-1 * sum_i rho^(-i t) * P(rho^i) over F_p."""
    check_primitive_root(rho, N, p)
    if not 0 <= t < N:
        raise PreconditionError(f"index {t} outside 0..{N - 1}")
    step = pow(rho, (-t) % N, p)
    x, w, acc = 1, 1, 0
    for _ in range(N):
        acc = (acc + w * eval_oracle(x)) % p
        x = x * rho % p
        w = w * step % p
    return acc * pow(N, -1, p) % p


def crt_reconstruct(residues: Iterable[tuple[int, int]], bound: int) -> int:
    """The unique x < bound with x = r_i mod p_i for every pair."""
    pairs = [(r % p, p) for r, p in residues]
    moduli = [p for _, p in pairs]
    for i, a in enumerate(moduli):
        for b in moduli[i + 1:]:
            if gcd(a, b) != 1:
                raise PreconditionError(f"moduli {a} and {b} are not coprime")
    P = prod(moduli)
    if P < bound:
        raise InsufficientModuli(f"product of moduli {P} is below bound {bound}")
    x = 0
    for r, p in pairs:
        q = P // p
        x += r * q * pow(q, -1, p)
    return x % P


def poly_eval(coeffs, x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc
