"""Prime-field arithmetic for a fixed odd modulus.

Elements carry a domain tag (standard residue or Montgomery form) and a range
tag.  Additive operations work lazily on operands in ``[0, 2p)`` and only
fold back into ``[0, p)`` when asked to.  Multiplication has two backends:

* ``montgomery`` -- word-serial Montgomery reduction (CIOS), operands and
  result in Montgomery form;
* ``standard``   -- plain double-width product folded back with precomputed
  residue tables, a software stand-in for a LUT-based hardware reducer.

Range checks are skipped under ``python -O``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Tuple

import gmpy2

WORD_BITS = 64
CHUNK_BITS = 8


class Domain(str, enum.Enum):
    STANDARD = "standard"
    MONTGOMERY = "montgomery"


class Range(str, enum.Enum):
    REDUCED = "reduced"
    LAZY = "lazy"


class DomainError(ValueError):
    """Operands from different domains, or a backend/domain mismatch."""


@dataclass(frozen=True)
class FieldParams:
    modulus: int
    word_bits: int = WORD_BITS
    chunk_bits: int = CHUNK_BITS
    bit_width: int = field(init=False)
    limb_count: int = field(init=False)
    montgomery_r: int = field(init=False)
    montgomery_r2: int = field(init=False)
    montgomery_pinv: int = field(init=False)
    reduction_tables: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        p = int(self.modulus)
        if p < 3 or p % 2 == 0 or not gmpy2.is_prime(p, 50):
            raise ValueError(f"modulus must be an odd prime, got {p}")
        bw = p.bit_length()
        limbs = -(-bw // self.word_bits)
        word = 1 << self.word_bits
        R = (1 << (limbs * self.word_bits)) % p
        pinv = (-pow(p, -1, word)) % word
        # Residues of c * 2^(bw + i*chunk) for every chunk of the high half.
        # Operands may be lazy (< 2p), so the product can reach 2*bw + 2 bits.
        n_chunks = -(-(bw + 2) // self.chunk_bits)
        tables = []
        for i in range(n_chunks):
            base = pow(2, bw + i * self.chunk_bits, p)
            tables.append(tuple(gmpy2.mpz(c * base % p) for c in range(1 << self.chunk_bits)))
        set_ = object.__setattr__
        set_(self, "modulus", p)
        set_(self, "bit_width", bw)
        set_(self, "limb_count", limbs)
        set_(self, "montgomery_r", R)
        set_(self, "montgomery_r2", R * R % p)
        set_(self, "montgomery_pinv", pinv)
        set_(self, "reduction_tables", tuple(tables))

    @property
    def hex_digits(self) -> int:
        return -(-self.bit_width // 4)

    def one(self, domain: Domain = Domain.STANDARD) -> "Fp":
        value = self.montgomery_r if domain is Domain.MONTGOMERY else 1
        return Fp(value, Domain(domain), Range.REDUCED)

    def element(self, value: int, domain: Domain = Domain.STANDARD) -> "Fp":
        """Build a reduced element from an ordinary integer residue."""
        a = Fp(int(value) % self.modulus, Domain.STANDARD, Range.REDUCED)
        if Domain(domain) is Domain.MONTGOMERY:
            return domain_convert(a, self, Domain.MONTGOMERY)
        return a


@dataclass(frozen=True)
class Fp:
    """Field element.  ``value`` is the raw stored integer (Montgomery form
    when ``domain`` is montgomery)."""

    value: int
    domain: Domain = Domain.STANDARD
    range: Range = Range.REDUCED

    def limbs(self, params: FieldParams) -> Tuple[int, ...]:
        mask = (1 << params.word_bits) - 1
        v = int(self.value)
        return tuple((v >> (i * params.word_bits)) & mask for i in range(params.limb_count))

    @classmethod
    def from_limbs(cls, limbs, params: FieldParams, domain=Domain.STANDARD) -> "Fp":
        v = sum(int(w) << (i * params.word_bits) for i, w in enumerate(limbs))
        rng = Range.REDUCED if v < params.modulus else Range.LAZY
        return _checked(cls(v, Domain(domain), rng), params)


def _checked(a: Fp, params: FieldParams) -> Fp:
    if __debug__:
        limit = params.modulus if a.range is Range.REDUCED else 2 * params.modulus
        if not 0 <= a.value < limit:
            raise ValueError(f"value out of {a.range.value} range")
    return a


def _same_domain(a: Fp, b: Fp, params: FieldParams) -> Domain:
    if __debug__:
        _checked(a, params)
        _checked(b, params)
    if a.domain is not b.domain:
        raise DomainError(f"cannot combine {a.domain.value} and {b.domain.value} operands")
    return a.domain


def _finish(v: int, domain: Domain, params: FieldParams, reduce: bool) -> Fp:
    if reduce:
        if v >= params.modulus:
            v -= params.modulus
        return _checked(Fp(v, domain, Range.REDUCED), params)
    rng = Range.REDUCED if v < params.modulus else Range.LAZY
    return _checked(Fp(v, domain, rng), params)


def fp_add(a: Fp, b: Fp, params: FieldParams, reduce: bool = False) -> Fp:
    domain = _same_domain(a, b, params)
    p2 = 2 * params.modulus
    v = a.value + b.value
    if v >= p2:
        v -= p2
    return _finish(v, domain, params, reduce)


def fp_sub(a: Fp, b: Fp, params: FieldParams, reduce: bool = False) -> Fp:
    domain = _same_domain(a, b, params)
    p = params.modulus
    v = p + a.value - b.value
    # lazy inputs widen the raw span to (-p, 3p)
    if v < 0:
        v += 2 * p
    elif v >= 2 * p:
        v -= 2 * p
    return _finish(v, domain, params, reduce)


def fp_shl1(a: Fp, params: FieldParams, reduce: bool = False) -> Fp:
    _checked(a, params)
    p2 = 2 * params.modulus
    v = a.value << 1
    if v >= p2:
        v -= p2
    return _finish(v, a.domain, params, reduce)


def fp_reduce(a: Fp, params: FieldParams) -> Fp:
    return _finish(a.value, a.domain, params, True)


def montgomery_redc(t: int, params: FieldParams) -> int:
    """Word-serial Montgomery reduction of ``t < p * 2^(limbs*w)``.

    Returns ``t * R^-1 mod p`` in ``[0, p)``.
    """
    p = params.modulus
    w = params.word_bits
    mask = (1 << w) - 1
    pinv = params.montgomery_pinv
    for _ in range(params.limb_count):
        q = ((t & mask) * pinv) & mask
        t = (t + q * p) >> w
    while t >= p:
        t -= p
    return t


def lut_reduce(t: int, params: FieldParams) -> int:
    """Fold a double-width product into ``[0, p)`` with the residue tables."""
    bw = params.bit_width
    cb = params.chunk_bits
    cmask = (1 << cb) - 1
    tables = params.reduction_tables
    low_mask = (1 << bw) - 1
    s = t & low_mask
    hi = t >> bw
    i = 0
    while hi:
        s += tables[i][hi & cmask]
        hi >>= cb
        i += 1
    # second, much shorter fold: s < 2^bw + n_chunks * p
    hi = s >> bw
    if hi:
        s = (s & low_mask) + tables[0][hi]
    p = params.modulus
    while s >= p:
        s -= p
    return int(s)


def fp_mul(a: Fp, b: Fp, params: FieldParams, backend: str = "standard") -> Fp:
    domain = _same_domain(a, b, params)
    backend = Domain(backend)
    if backend is not domain:
        raise DomainError(f"{backend.value} backend needs {backend.value}-domain operands, got {domain.value}")
    t = a.value * b.value
    if backend is Domain.MONTGOMERY:
        v = montgomery_redc(t, params)
    else:
        v = lut_reduce(t, params)
    return _checked(Fp(v, domain, Range.REDUCED), params)


def fp_inv(a: Fp, params: FieldParams) -> Fp:
    p = params.modulus
    v = a.value % p
    if v == 0:
        raise ZeroDivisionError("inverse of zero")
    inv = int(gmpy2.invert(v, p))
    if a.domain is Domain.MONTGOMERY:
        # (aR)^-1 * R^2 = a^-1 R
        inv = inv * params.montgomery_r2 % p
    return Fp(inv, a.domain, Range.REDUCED)


def domain_convert(a: Fp, params: FieldParams, to: Domain | str) -> Fp:
    to = Domain(to)
    p = params.modulus
    v = a.value % p
    if a.domain is to:
        return Fp(v, to, Range.REDUCED)
    if to is Domain.MONTGOMERY:
        v = v * params.montgomery_r % p
    else:
        v = montgomery_redc(v, params)
    return Fp(v, to, Range.REDUCED)


def to_hex(value: int, params: FieldParams) -> str:
    return format(int(value), "x").zfill(params.hex_digits)


def from_hex(text: str, params: FieldParams) -> int:
    text = text.strip()
    if not text or len(text) > params.hex_digits:
        raise ValueError(f"bad field hex {text!r}")
    v = int(text, 16)
    if v >= params.modulus:
        raise ValueError(f"field element {text} not below modulus")
    return v
