"""Small finite fields F_q with table arithmetic.

Elements are plain ints in ``range(q)``.  For q = p^k the integer
``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` stands for ``c_0 + c_1 x + ...``
in F_p[x]/(m(x)), where m is a fixed Conway polynomial and x is its root.
The multiplicative generator ``g`` is that root (for prime q, the least
primitive root).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import MalformedInput

# coefficients of the Conway polynomial, constant term first, monic top omitted
_CONWAY = {
    2: (1,),        # x + 1
    3: (1,),        # x + 1
    5: (3,),        # x + 3
    7: (4,),        # x + 4
    4: (1, 1),      # x^2 + x + 1
    8: (1, 1, 0),   # x^3 + x + 1
    9: (2, 2),      # x^2 + 2x + 2
}

SUPPORTED_Q = tuple(sorted(_CONWAY))


def _factor_prime_power(q):
    for p in (2, 3, 5, 7):
        k, r = 0, q
        while r % p == 0:
            r //= p
            k += 1
        if r == 1 and k:
            return p, k
    raise MalformedInput(f"q={q} is not a supported prime power")


def _fft_convolve(a, b):
    # entries are below 7, so products stay far inside float64's exact range
    n = len(a) + len(b) - 1
    size = 1 << (n - 1).bit_length()
    out = np.fft.irfft(np.fft.rfft(a, size) * np.fft.rfft(b, size), size)[:n]
    return np.rint(out).astype(np.int64)


class GF:
    """The field F_q.  Use :func:`field` to get the shared instance."""

    def __init__(self, q: int):
        if q not in _CONWAY:
            raise MalformedInput(f"unsupported q={q}; choose one of {SUPPORTED_Q}")
        self.q = q
        self.p, self.k = _factor_prime_power(q)
        self.prime = self.k == 1
        p, k = self.p, self.k
        self.modulus = _CONWAY[q]

        digits = [self._digits(a) for a in range(q)]
        add = [[self._undigits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                for b in range(q)] for a in range(q)]
        mul = [[self._undigits(self._polymul_mod(digits[a], digits[b]))
                for b in range(q)] for a in range(q)]
        self.ADD = add
        self.MUL = mul
        self.NEG = [self._undigits([(-x) % p for x in digits[a]]) for a in range(q)]
        self.SUB = [[add[a][self.NEG[b]] for b in range(q)] for a in range(q)]
        self.INV = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    self.INV[a] = b

        # generator and discrete logs
        self.g = (p - self.modulus[0]) % p if self.prime else p
        self.POW = [1]
        for _ in range(q - 2):
            self.POW.append(mul[self.POW[-1]][self.g])
        if len(set(self.POW)) != q - 1:
            raise AssertionError(f"generator of F_{q} is not primitive")
        self.LOG = {x: e for e, x in enumerate(self.POW)}

        self.ADD_np = np.array(add, dtype=np.int64)
        self.SUB_np = np.array(self.SUB, dtype=np.int64)
        self.MUL_np = np.array(mul, dtype=np.int64)
        self.NEG_np = np.array(self.NEG, dtype=np.int64)

    # -- encoding helpers
    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds):
        return sum(d * self.p ** j for j, d in enumerate(ds))

    def _polymul_mod(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for i, m in enumerate(self.modulus):
                    prod[deg - k + i] = (prod[deg - k + i] - c * m) % p
        return prod[:k]

    def __repr__(self):
        return f"GF({self.q})"

    def __reduce__(self):
        return (field, (self.q,))

    # -- scalar helpers
    def char(self, e: int) -> int:
        """g**e as a field element."""
        return self.POW[e % (self.q - 1)]

    def log(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("log of zero")
        return self.LOG[a]

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    def pow(self, a, n):
        if a == 0:
            return 0 if n > 0 else 1
        return self.POW[(self.LOG[a] * n) % (self.q - 1)]

    # -- vectorised helpers on int64 arrays
    def vadd(self, a, b):
        if self.prime:
            return (a + b) % self.p
        return self.ADD_np[a, b]

    def vsub(self, a, b):
        if self.prime:
            return (a - b) % self.p
        return self.SUB_np[a, b]

    def vscale(self, c, a):
        if self.prime:
            return (c * a) % self.p
        return self.MUL_np[c][a]

    def vneg(self, a):
        if self.prime:
            return (-a) % self.p
        return self.NEG_np[a]

    def conv(self, a, b):
        """Polynomial product of two coefficient arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.prime:
            if min(len(a), len(b)) > 128:
                return _fft_convolve(a, b) % self.p
            return np.convolve(a, b) % self.p
        p, k = self.p, self.k
        da = [(a // p ** j) % p for j in range(k)]
        db = [(b // p ** j) % p for j in range(k)]
        n = len(a) + len(b) - 1
        parts = [np.zeros(n, dtype=np.int64) for _ in range(2 * k - 1)]
        for i in range(k):
            for j in range(k):
                parts[i + j] += np.convolve(da[i], db[j])
        for deg in range(2 * k - 2, k - 1, -1):
            c = parts[deg] % p
            for i, m in enumerate(self.modulus):
                if m:
                    parts[deg - k + i] -= c * m
        out = np.zeros(n, dtype=np.int64)
        for j in range(k):
            out += (parts[j] % p) * p ** j
        return out

    def format(self, a: int) -> str:
        if self.prime:
            return str(a)
        return "[" + ",".join(str(d) for d in self._digits(a)) + "]"

    def parse(self, text: str) -> int:
        text = text.strip()
        if text.startswith("["):
            ds = [int(x) for x in text.strip("[]").split(",")]
            if len(ds) != self.k or any(not 0 <= d < self.p for d in ds):
                raise MalformedInput(f"bad F_{self.q} digit vector {text!r}")
            return self._undigits(ds)
        n = int(text)
        if self.prime:
            return n % self.p
        if not 0 <= n < self.p:
            raise MalformedInput(f"bad F_{self.q} element {text!r}")
        return n


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
