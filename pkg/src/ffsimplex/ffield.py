"""Arithmetic in GF(q) for odd prime powers q = p^e.

Elements are represented by their canonical index in [0, q): the element
c_0 + c_1 X + ... + c_{e-1} X^{e-1} of GF(p)[X]/(modulus) has index
c_0 + c_1 p + ... + c_{e-1} p^{e-1}.  For e = 1 this is the usual residue.

Scalar operations go through polynomial arithmetic.  Vectorized operations
on numpy arrays use modular integer arithmetic for prime fields and
precomputed q-by-q tables for extension fields.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .config import MAX_FIELD_ORDER

TABLE_MAX = 1024  # largest q for which full q*q operation tables are built


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


# Polynomials over GF(p) are little-endian coefficient lists without
# trailing zeros; [] is the zero polynomial.

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    c = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                c[i + j] = (c[i + j] + x * y) % p
    return _trim(c)


def _poly_divmod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError('polynomial division by zero')
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b):
        c = rem[-1] * inv_lead % p
        shift = len(rem) - len(b)
        quot[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * y) % p
        rem = _trim(rem)
    return _trim(quot), rem


def _poly_egcd(a, b, p):
    """Return (g, s, t) with s*a + t*b = g and g monic."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1, p), p)
    if r0:
        c = pow(r0[-1], p - 2, p)
        r0 = _poly_mul(r0, [c], p)
        s0 = _poly_mul(s0, [c], p)
        t0 = _poly_mul(t0, [c], p)
    return r0, s0, t0


def _monic_polys(degree, p):
    """Monic polynomials of the given degree, low-degree coefficients most significant."""
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim(poly)
    n = len(poly) - 1
    if n < 1:
        return False
    for deg in range(1, n // 2 + 1):
        for g in _monic_polys(deg, p):
            if not _poly_divmod(poly, g, p)[1]:
                return False
    return True


def _egcd_int(a, b):
    x0, x1 = 1, 0
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
    return a, x0


@dataclass(frozen=True)
class Field:
    """The finite field GF(p^e) with a fixed modulus and generator."""

    p: int
    e: int
    modulus: tuple
    nu: int = dc_field(default=-1, compare=False)

    @property
    def q(self) -> int:
        return self.p ** self.e

    def __repr__(self):
        return f'GF({self.p}^{self.e})'

    # --- encoding -------------------------------------------------------

    def coeffs(self, a: int) -> tuple:
        out = []
        for _ in range(self.e):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        idx = 0
        for c in reversed(list(coeffs)):
            idx = idx * self.p + c % self.p
        return idx

    def _check(self, a):
        if not 0 <= a < self.q:
            raise ValueError(f'{a} is not an element of {self!r}')

    # --- scalar arithmetic ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self.from_coeffs((x + y) % self.p for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        return self.from_coeffs(-x % self.p for x in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        prod = _poly_mul(_trim(self.coeffs(a)), _trim(self.coeffs(b)), self.p)
        rem = _poly_divmod(prod, list(self.modulus), self.p)[1]
        return self.from_coeffs(rem)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f'zero has no inverse in {self!r}')
        if self.e == 1:
            g, x = _egcd_int(a, self.p)
            return x % self.p
        g, s, _ = _poly_egcd(_trim(self.coeffs(a)), list(self.modulus), self.p)
        assert g == [1]
        return self.from_coeffs(s)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError('zero has no multiplicative order')
        n = self.q - 1
        order = n
        for r in _prime_factors(n):
            while order % r == 0 and self.pow(a, order // r) == 1:
                order //= r
        return order

    def chi(self, a: int) -> int:
        """Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise."""
        if a == 0:
            return 0
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def sqrt(self, a: int):
        """The square root with smaller index, or None for non-squares."""
        r = int(self.sqrt_table[a])
        return r if r >= 0 else None

    def trace(self, a: int) -> int:
        """Absolute trace a + a^p + ... + a^(p^(e-1)), as an element of GF(p)."""
        t = 0
        x = a
        for _ in range(self.e):
            t = self.add(t, x)
            x = self.pow(x, self.p)
        assert t < self.p
        return t

    def log(self, a: int) -> int:
        """Discrete log to base nu."""
        return int(self.log_table[a])

    # --- tables ---------------------------------------------------------

    @functools.cached_property
    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    def _require_tables(self):
        if self.q > TABLE_MAX:
            raise ValueError(f'{self!r} is too large for q*q operation tables')

    @functools.cached_property
    def add_table(self):
        self._require_tables()
        q = self.q
        c = np.array([self.coeffs(a) for a in range(q)], dtype=np.int64)
        s = (c[:, None, :] + c[None, :, :]) % self.p
        return s @ (self.p ** np.arange(self.e, dtype=np.int64))

    @functools.cached_property
    def mul_table(self):
        q = self.q
        self._require_tables()
        if self.e == 1:
            a = np.arange(q, dtype=np.int64)
            return np.outer(a, a) % q
        # multiplication via powers of nu
        t = np.zeros((q, q), dtype=np.int64)
        lg = self.log_table
        pw = self.exp_table
        nz = np.arange(1, q)
        t[1:, 1:] = pw[(lg[nz][:, None] + lg[nz][None, :]) % (q - 1)]
        return t

    @functools.cached_property
    def exp_table(self):
        """exp_table[i] = nu**i for 0 <= i < q-1."""
        out = np.empty(self.q - 1, dtype=np.int64)
        x = 1
        for i in range(self.q - 1):
            out[i] = x
            x = self.mul(x, self.nu)
        return out

    @functools.cached_property
    def log_table(self):
        """Discrete logs base nu; entry 0 is -1."""
        lg = np.full(self.q, -1, dtype=np.int64)
        lg[self.exp_table] = np.arange(self.q - 1)
        return lg

    @functools.cached_property
    def neg_table(self):
        return np.array([self.neg(a) for a in range(self.q)], dtype=np.int64)

    @functools.cached_property
    def inv_table(self):
        """inv_table[0] is 0 by convention."""
        t = np.zeros(self.q, dtype=np.int64)
        t[1:] = self.exp_table[(-self.log_table[1:]) % (self.q - 1)]
        return t

    @functools.cached_property
    def sq_table(self):
        t = np.zeros(self.q, dtype=np.int64)
        t[1:] = self.exp_table[(2 * self.log_table[1:]) % (self.q - 1)]
        return t

    @functools.cached_property
    def chi_table(self):
        """Quadratic character from the parity of discrete logs."""
        t = np.zeros(self.q, dtype=np.int64)
        t[1:] = np.where(self.log_table[1:] % 2 == 0, 1, -1)
        return t

    @functools.cached_property
    def sqrt_table(self):
        """Smaller-index square root of each element, -1 for non-squares."""
        t = np.full(self.q, -1, dtype=np.int64)
        for r in range(self.q - 1, -1, -1):
            t[self.sq_table[r]] = r
        return t

    @functools.cached_property
    def trace_table(self):
        return np.array([self.trace(a) for a in range(self.q)], dtype=np.int64)

    @functools.cached_property
    def trace_form(self):
        """Matrix T over GF(p) with Tr(x*y) = c(x) @ T @ c(y) mod p."""
        basis = [self.from_coeffs([int(i == j) for i in range(self.e)]) for j in range(self.e)]
        return np.array([[self.trace(self.mul(u, v)) for v in basis] for u in basis], dtype=np.int64)

    @functools.cached_property
    def coeff_table(self):
        """coeff_table[a] is the length-e coefficient vector of a."""
        return np.array([self.coeffs(a) for a in range(self.q)], dtype=np.int64).reshape(self.q, self.e)

    # --- vectorized arithmetic -------------------------------------------

    def vadd(self, a, b):
        if self.e == 1:
            return (np.asarray(a) + b) % self.p
        return self.add_table[a, b]

    def vneg(self, a):
        if self.e == 1:
            return -np.asarray(a) % self.p
        return self.neg_table[a]

    def vsub(self, a, b):
        if self.e == 1:
            return (np.asarray(a) - b) % self.p
        return self.add_table[a, self.neg_table[b]]

    def vmul(self, a, b):
        if self.e == 1:
            return np.asarray(a) * b % self.p
        return self.mul_table[a, b]

    def vsum(self, a, axis=-1):
        """Field sum along an axis."""
        a = np.asarray(a)
        if self.e == 1:
            return a.sum(axis=axis) % self.p
        a = np.moveaxis(a, axis, -1)
        out = a[..., 0]
        for i in range(1, a.shape[-1]):
            out = self.add_table[out, a[..., i]]
        return out

    def vdot(self, a, b):
        """Bilinear dot product along the last axis (broadcasting)."""
        if self.e == 1:
            return (np.asarray(a) * b).sum(axis=-1) % self.p
        return self.vsum(self.mul_table[a, b])

    def vnorm(self, x):
        """x_1^2 + ... + x_d^2 along the last axis."""
        if self.e == 1:
            x = np.asarray(x)
            return (x * x).sum(axis=-1) % self.p
        return self.vsum(self.sq_table[x])


def _prime_factors(n):
    out = []
    r = 2
    while r * r <= n:
        if n % r == 0:
            out.append(r)
            while n % r == 0:
                n //= r
        r += 1
    if n > 1:
        out.append(n)
    return out


@functools.lru_cache(maxsize=None)
def make_field(p: int, e: int = 1, max_order: int = MAX_FIELD_ORDER) -> Field:
    """Build GF(p^e) with the lexicographically smallest monic irreducible
    modulus and the smallest-index generator of the multiplicative group."""
    if not is_prime(p):
        raise ValueError(f'characteristic {p} is not prime')
    if p == 2:
        raise ValueError('characteristic 2 is not supported')
    if e < 1:
        raise ValueError(f'extension degree must be >= 1, got {e}')
    if p ** e > max_order:
        raise ValueError(f'field order {p}^{e} exceeds the maximum {max_order}')
    if e == 1:
        modulus = (0, 1)
    else:
        modulus = next(tuple(m) for m in _monic_polys(e, p) if is_irreducible(m, p))
    f = Field(p, e, modulus)
    nu = next(a for a in range(1, f.q) if f.order(a) == f.q - 1)
    return Field(p, e, modulus, nu)


def field_of_order(q: int) -> Field:
    """make_field for a prime power given as q."""
    for p in range(3, q + 1, 2):
        if is_prime(p) and q % p == 0:
            e = 0
            n = q
            while n % p == 0:
                n //= p
                e += 1
            if n != 1:
                break
            return make_field(p, e)
    raise ValueError(f'{q} is not an odd prime power')


def arith(f: Field, a: int, b: int, op: str) -> int:
    f._check(a)
    f._check(b)
    if op == 'add':
        return f.add(a, b)
    if op == 'sub':
        return f.sub(a, b)
    if op == 'mul':
        return f.mul(a, b)
    if op == 'div':
        return f.div(a, b)
    raise ValueError(f'unknown operation {op!r}')


def quadratic_character(f: Field, a: int) -> int:
    f._check(a)
    return f.chi(a)


def sqrt_in_field(f: Field, a: int):
    f._check(a)
    return f.sqrt(a)


def char_table_checksum(f: Field) -> str:
    """SHA-256 of the quadratic character values chi(0), ..., chi(q-1)."""
    import hashlib
    data = ','.join(str(f.chi(a)) for a in range(f.q)).encode()
    return hashlib.sha256(data).hexdigest()
