"""Finite fields F_{p^m} with integer-encoded elements.

An element of F_{p^m} is stored as the integer ``c_0 + c_1 p + ... + c_{m-1} p^{m-1}``
where ``c_i`` are its coordinates in the power basis of the minimal polynomial.
Prime fields (m = 1) use plain residues.  Extension fields carry exp/log/Zech
tables so that both scalar and vectorised arithmetic are table lookups.

Univariate polynomials are plain lists of encoded coefficients, lowest degree
first, with no trailing zeros.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DivisionByZero, SpecMismatch, ZeroPolynomial

MAX_ORDER = 1 << 22
MAX_PRIME = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over F_p with python-int coefficients (used to build extensions)


def _pp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _pp_trim(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _pp_trim(a)
    return a


def _pp_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pp_mod(out, f, p)


def _pp_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pp_mod(list(a), f, p)
    while e:
        if e & 1:
            result = _pp_mulmod(result, base, f, p)
        base = _pp_mulmod(base, base, f, p)
        e >>= 1
    return result


def _pp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _pp_trim([c % p for c in a])
    b = _pp_trim([c % p for c in b])
    while b:
        a, b = b, _pp_mod(a, b, p)
    return a


def _is_irreducible_fp(f: list[int], p: int) -> bool:
    """Rabin's test for a monic f over F_p."""
    m = len(f) - 1
    if m == 1:
        return True
    x = [0, 1]
    if _pp_powmod(x, p**m, f, p) != _pp_mod(list(x), f, p):
        return False
    for r in _prime_factors(m):
        h = _pp_powmod(x, p ** (m // r), f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        g = _pp_gcd(f, h, p)
        if len(g) > 1:
            return False
    return True


def find_irreducible(p: int, m: int, seed: int = 0) -> list[int]:
    """Return a monic irreducible polynomial of degree m over F_p.

    The search walks the monic polynomials in a fixed order starting from an
    offset derived from ``seed``, so the result is deterministic in (p, m, seed).
    Coefficients are listed lowest degree first and include the leading 1.
    """
    if m < 1:
        raise ValueError("degree must be at least 1")
    if m == 1:
        return [seed % p, 1]
    total = p**m
    start = seed % total
    for k in range(total):
        code = (start + k) % total
        coeffs = []
        for _ in range(m):
            coeffs.append(code % p)
            code //= p
        f = coeffs + [1]
        if f[0] == 0:
            continue
        if _is_irreducible_fp(f, p):
            return f
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


# ---------------------------------------------------------------------------


class Field:
    """The finite field F_{p^m}; elements are python ints (or int64 arrays)."""

    def __init__(self, p: int, m: int = 1, min_poly: Sequence[int] | None = None):
        if not is_prime(p) or p < 3:
            raise ValueError(f"p must be an odd prime, got {p}")
        if p > MAX_PRIME:
            raise ValueError(f"p must be below {MAX_PRIME}")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if p**m > MAX_ORDER:
            raise ValueError(f"field order {p}^{m} exceeds the supported size {MAX_ORDER}")
        self.p = p
        self.m = m
        self.q = p**m
        if m == 1:
            self.min_poly = [0, 1]
        else:
            if min_poly is None:
                min_poly = find_irreducible(p, m)
            mp = [int(c) % p for c in min_poly]
            if len(mp) != m + 1 or mp[-1] != 1:
                raise ValueError("min_poly must be monic of degree m")
            if not _is_irreducible_fp(mp, p):
                raise ValueError(f"min_poly {mp} is reducible over F_{p}")
            self.min_poly = mp
            self._build_tables()
        self.half = (self.q - 1) // 2

    # -- construction -------------------------------------------------------

    def _build_tables(self) -> None:
        p, q = self.p, self.q
        f = self.min_poly
        gen = None
        factors = _prime_factors(q - 1)
        for code in range(2, q):
            g = self._decode_list(code)
            if all(_pp_powmod(g, (q - 1) // r, f, p) != [1] for r in factors):
                gen = g
                break
        assert gen is not None
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = [1]
        for i in range(q - 1):
            code = self._encode_list(cur)
            exp[i] = code
            log[code] = i
            cur = _pp_mulmod(cur, gen, f, p)
        # zech[k] = log(1 + g^k), -1 when 1 + g^k = 0
        c0 = exp % p
        one_plus = np.where(c0 == p - 1, exp - (p - 1), exp + 1)
        zech = log[one_plus]
        self._exp = exp
        self._log = log
        self._zech = zech
        self._exp_l = exp.tolist()
        self._log_l = log.tolist()
        self._zech_l = zech.tolist()

    def _decode_list(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return _pp_trim(out)

    def _encode_list(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + int(c)
        return code

    # -- identity / serialisation --------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.m == other.m
            and self.min_poly == other.min_poly
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, tuple(self.min_poly)))

    def __repr__(self) -> str:
        if self.m == 1:
            return f"Field(F_{self.p})"
        return f"Field(F_{self.p}^{self.m}, min_poly={self.min_poly})"

    def spec(self) -> dict:
        return {"p": self.p, "m": self.m, "min_poly": list(self.min_poly)}

    @classmethod
    def from_spec(cls, d: dict) -> "Field":
        m = int(d.get("m", 1))
        mp = d.get("min_poly") if m > 1 else None
        return cls(int(d["p"]), m, mp)

    def coeffs(self, a: int) -> list[int]:
        """Power-basis coordinates of ``a`` (fixed length m)."""
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    def element(self, value: int | Sequence[int]) -> int:
        if isinstance(value, (int, np.integer)):
            return int(value) % self.p if self.m == 1 else self._check_code(int(value))
        coeffs = list(value)
        if len(coeffs) != self.m:
            raise SpecMismatch(f"expected {self.m} coefficients, got {len(coeffs)}")
        return self._encode_list([int(c) % self.p for c in coeffs])

    def _check_code(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise SpecMismatch(f"{a} is not an encoded element of F_{self.q}")
        return a

    def to_json(self, a: int):
        return int(a) if self.m == 1 else self.coeffs(int(a))

    def from_json(self, v) -> int:
        if self.m == 1:
            if isinstance(v, list):
                raise SpecMismatch("prime-field elements serialise as integers")
            return int(v) % self.p
        if not isinstance(v, list):
            raise SpecMismatch("extension-field elements serialise as arrays")
        return self.element(v)

    # -- scalar arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log_l[a], self._log_l[b]
        z = self._zech_l[(lb - la) % (self.q - 1)]
        if z < 0:
            return 0
        return self._exp_l[(la + z) % (self.q - 1)]

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        if a == 0:
            return 0
        return self._exp_l[(self._log_l[a] + self.half) % (self.q - 1)]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp_l[(self._log_l[a] + self._log_l[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp_l[(-self._log_l[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.m == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp_l[(self._log_l[a] * e) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F."""
        return n % self.p

    def dot(self, xs: Iterable[int], ys: Iterable[int]) -> int:
        acc = 0
        for x, y in zip(xs, ys):
            if x and y:
                acc = self.add(acc, self.mul(x, y))
        return acc

    # -- vectorised arithmetic on int64 arrays --------------------------------

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a + b) % self.p
        q1 = self.q - 1
        la = self._log[a]
        lb = self._log[b]
        z = self._zech[(lb - la) % q1]
        res = np.where(z < 0, 0, self._exp[(la + z) % q1])
        res = np.where(a == 0, b, np.where(b == 0, a, res))
        return res.astype(np.int64)

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return (-a) % self.p
        res = self._exp[(self._log[a] + self.half) % (self.q - 1)]
        return np.where(a == 0, 0, res).astype(np.int64)

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return a * b % self.p
        res = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, res).astype(np.int64)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        if self.m == 1:
            return np.array([pow(int(x), self.p - 2, self.p) for x in a.ravel()], dtype=np.int64).reshape(a.shape)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def vsum(self, a, axis: int = 0):
        """Field sum of an array along ``axis``."""
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return a.sum(axis=axis) % self.p
        a = np.moveaxis(a, axis, 0)
        acc = np.zeros(a.shape[1:], dtype=np.int64)
        for row in a:
            acc = self.vadd(acc, row)
        return acc

    def random(self, rng: np.random.Generator, size=None):
        return rng.integers(0, self.q, size=size, dtype=np.int64)

    def random_nonzero(self, rng: np.random.Generator, size=None):
        return rng.integers(1, self.q, size=size, dtype=np.int64)


@lru_cache(maxsize=None)
def get_field(p: int, m: int = 1, seed: int = 0) -> Field:
    """Cached field constructor using the deterministic irreducible search."""
    if m == 1:
        return Field(p)
    return Field(p, m, find_irreducible(p, m, seed))


def field_arith(F: Field, op: str, *operands) -> int:
    """Apply one of add/sub/mul/div/neg/inv/pow to encoded elements or coefficient lists."""
    vals = []
    for x in operands:
        if isinstance(x, (list, tuple, np.ndarray)):
            vals.append(F.element(x))
        else:
            vals.append(x)
    if op == "add":
        return F.add(F.element(vals[0]), F.element(vals[1]))
    if op == "sub":
        return F.sub(F.element(vals[0]), F.element(vals[1]))
    if op == "mul":
        return F.mul(F.element(vals[0]), F.element(vals[1]))
    if op == "div":
        return F.div(F.element(vals[0]), F.element(vals[1]))
    if op == "neg":
        return F.neg(F.element(vals[0]))
    if op == "inv":
        return F.inv(F.element(vals[0]))
    if op == "pow":
        return F.pow(F.element(vals[0]), int(vals[1]))
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# univariate polynomials over F


def poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(F: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
    return poly_trim(out)


def poly_sub(F: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    return poly_add(F, a, [F.neg(c) for c in b])


def poly_scale(F: Field, a: Sequence[int], c: int) -> list[int]:
    return poly_trim([F.mul(x, c) for x in a])


def poly_mul(F: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(out)


def poly_divmod(F: Field, a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    b = poly_trim(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    r = poly_trim(list(a))
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    inv_lead = F.inv(b[-1])
    quo = [0] * (len(r) - db)
    while r and len(r) - 1 >= db:
        c = F.mul(r[-1], inv_lead)
        shift = len(r) - 1 - db
        quo[shift] = c
        for i, bc in enumerate(b):
            if bc:
                r[shift + i] = F.sub(r[shift + i], F.mul(c, bc))
        r.pop()
        poly_trim(r)
    return poly_trim(quo), r


def poly_mod(F: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    return poly_divmod(F, a, b)[1]


def poly_monic(F: Field, a: Sequence[int]) -> list[int]:
    a = poly_trim(list(a))
    if not a:
        return a
    return poly_scale(F, a, F.inv(a[-1]))


def poly_gcd(F: Field, a: Sequence[int], b: Sequence[int]) -> list[int]:
    a = poly_trim(list(a))
    b = poly_trim(list(b))
    while b:
        a, b = b, poly_mod(F, a, b)
    return poly_monic(F, a)


def poly_powmod(F: Field, a: Sequence[int], e: int, f: Sequence[int]) -> list[int]:
    result = [1]
    base = poly_mod(F, a, f)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, base), f)
        base = poly_mod(F, poly_mul(F, base, base), f)
        e >>= 1
    return result


def poly_eval(F: Field, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_pow(F: Field, a: Sequence[int], e: int) -> list[int]:
    out = [1]
    for _ in range(e):
        out = poly_mul(F, out, a)
    return out


EXHAUSTIVE_LIMIT = 64


def _split_linear(F: Field, g: list[int], rng: random.Random) -> list[int]:
    """Roots of a monic squarefree g that splits into distinct linear factors."""
    d = len(g) - 1
    if d == 0:
        return []
    if d == 1:
        return [F.neg(g[0])]
    e = (F.q - 1) // 2
    while True:
        a = rng.randrange(F.q)
        h = poly_powmod(F, [a, 1], e, g)
        h = poly_sub(F, h, [1])
        c = poly_gcd(F, g, h)
        if 0 < len(c) - 1 < d:
            return _split_linear(F, c, rng) + _split_linear(F, poly_divmod(F, g, c)[0], rng)


def univariate_roots(F: Field, poly: Sequence[int]) -> list[tuple[int, int]]:
    """All roots of ``poly`` lying in F, with multiplicities, sorted by encoding.

    Distinct roots come from gcd(f, x^q - x) split by Cantor-Zassenhaus; tiny
    fields are scanned exhaustively instead.
    """
    f = poly_trim([int(c) for c in poly])
    if not f:
        raise ZeroPolynomial("roots of the zero polynomial")
    if len(f) == 1:
        return []
    f = poly_monic(F, f)
    if F.q <= EXHAUSTIVE_LIMIT:
        roots = [r for r in range(F.q) if poly_eval(F, f, r) == 0]
    else:
        xq = poly_powmod(F, [0, 1], F.q, f)
        g = poly_gcd(F, f, poly_sub(F, xq, [0, 1]))
        rng = random.Random(len(f) * 1_000_003 + F.q)
        roots = _split_linear(F, g, rng)
    out = []
    for r in sorted(roots):
        mult = 0
        rest = f
        lin = [F.neg(r), 1]
        while True:
            quo, rem = poly_divmod(F, rest, lin)
            if rem:
                break
            mult += 1
            rest = quo
        out.append((r, mult))
    return out
