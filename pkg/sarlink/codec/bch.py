"""Shortened binary BCH codes protecting PDF-1 and PDF-2.

BCH-1 is the (127,106) triple-error-correcting code over GF(2^7), shortened
to 82 bits (61 data + 21 parity). BCH-2 is the (63,51) double-error-correcting
code over GF(2^6), shortened to 38 bits (26 data + 12 parity). The absent
leading bits of the parent codes are zeros and never reported as errors.

Codeword bit positions are 1-indexed, position 1 being the highest-degree
coefficient (the first transmitted bit).
"""

import functools
import itertools
import logging
import operator
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Sequence, Tuple, Union

import galois
import numpy as np

from ..frame.bitframe import bits_to_int, int_to_bits

logger = logging.getLogger(__name__)

BitsLike = Union[Sequence[int], np.ndarray]


class BchError(ValueError):
    """Base class for BCH coding errors."""


class WrongLength(BchError):
    """Message or codeword length does not match the code."""


@dataclass(frozen=True)
class BchCode:
    """A shortened binary BCH code definition."""

    name: str
    generator: int  # coefficient bits, MSB = highest degree
    data_len: int
    parity_len: int
    t: int
    parent_n: int
    parent_k: int

    def __post_init__(self):
        if self.generator.bit_length() - 1 != self.parity_len:
            raise BchError(f"{self.name}: generator degree must equal parity length {self.parity_len}")
        if not self.generator & 1:
            raise BchError(f"{self.name}: generator needs a nonzero constant term")
        if self.data_len + self.parity_len > self.parent_n:
            raise BchError(f"{self.name}: shortened length exceeds parent n={self.parent_n}")

    @property
    def codeword_len(self) -> int:
        return self.data_len + self.parity_len

    @property
    def generator_bits(self) -> str:
        """Generator as a binary string, MSB = highest degree."""
        return f"{self.generator:b}"


class CheckStatus(str, Enum):
    CLEAN = "clean"
    CORRECTED = "corrected"
    UNCORRECTABLE = "uncorrectable"


@dataclass
class CheckResult:
    """Outcome of checking (and possibly correcting) one codeword."""

    status: CheckStatus
    error_positions: List[int] = field(default_factory=list)
    corrected_codeword: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.uint8))

    @property
    def usable(self) -> bool:
        return self.status is not CheckStatus.UNCORRECTABLE


def _minimal_polynomial_product(degree: int, irreducible_poly: str, powers: Sequence[int]) -> int:
    """Product of the minimal polynomials of alpha^p over GF(2^degree)."""
    field_ = galois.GF(2 ** degree, irreducible_poly=irreducible_poly)
    alpha = field_(2)  # the element x, primitive for both fields used here
    factors = [(alpha ** power).minimal_poly() for power in powers]
    generator = functools.reduce(operator.mul, factors)
    return int("".join(str(int(c)) for c in generator.coeffs), 2)


@functools.lru_cache(maxsize=None)
def gen_polys() -> Tuple[BchCode, BchCode]:
    """Build the BCH-1 and BCH-2 code definitions."""
    bch1 = BchCode(
        name="BCH1",
        generator=_minimal_polynomial_product(7, "x^7 + x^3 + 1", (1, 3, 5)),
        data_len=61, parity_len=21, t=3, parent_n=127, parent_k=106,
    )
    bch2 = BchCode(
        name="BCH2",
        generator=_minimal_polynomial_product(6, "x^6 + x + 1", (1, 3)),
        data_len=26, parity_len=12, t=2, parent_n=63, parent_k=51,
    )
    logger.debug(f"BCH1 g(x)={bch1.generator_bits}, BCH2 g(x)={bch2.generator_bits}")
    return bch1, bch2


def poly_mod(value: int, generator: int) -> int:
    """Remainder of value(x) divided by generator(x) over GF(2)."""
    degree = generator.bit_length() - 1
    while value.bit_length() > degree:
        value ^= generator << (value.bit_length() - 1 - degree)
    return value


def _as_bits(bits: BitsLike, length: int, what: str) -> np.ndarray:
    array = np.asarray(bits, dtype=np.uint8)
    if array.ndim != 1 or array.size != length:
        raise WrongLength(f"{what} must be {length} bits, got {array.size}")
    return array


def parity(message: BitsLike, code: BchCode) -> np.ndarray:
    """Parity bits: remainder of message(x)·x^parity_len mod g(x)."""
    bits = _as_bits(message, code.data_len, f"{code.name} message")
    remainder = poly_mod(bits_to_int(bits) << code.parity_len, code.generator)
    return int_to_bits(remainder, code.parity_len)


def syndrome(codeword: BitsLike, code: BchCode) -> int:
    """Remainder of codeword(x) mod g(x); zero for valid codewords."""
    bits = _as_bits(codeword, code.codeword_len, f"{code.name} codeword")
    return poly_mod(bits_to_int(bits), code.generator)


@functools.lru_cache(maxsize=None)
def _syndrome_table(code: BchCode) -> Dict[int, Tuple[int, ...]]:
    """Map every syndrome of an error pattern of weight <= t to its positions."""
    n = code.codeword_len
    single = [poly_mod(1 << (n - position), code.generator) for position in range(1, n + 1)]
    table: Dict[int, Tuple[int, ...]] = {}
    for weight in range(1, code.t + 1):
        for indices in itertools.combinations(range(n), weight):
            value = functools.reduce(operator.xor, (single[i] for i in indices))
            table.setdefault(value, tuple(i + 1 for i in indices))
    logger.debug(f"{code.name}: syndrome table with {len(table)} entries")
    return table


def check_and_correct(codeword: BitsLike, code: BchCode) -> CheckResult:
    """Check a codeword and correct up to ``code.t`` bit errors."""
    bits = _as_bits(codeword, code.codeword_len, f"{code.name} codeword")
    remainder = poly_mod(bits_to_int(bits), code.generator)
    if remainder == 0:
        return CheckResult(CheckStatus.CLEAN, [], bits.copy())

    positions = _syndrome_table(code).get(remainder)
    if positions is None:
        return CheckResult(CheckStatus.UNCORRECTABLE, [], bits.copy())

    corrected = bits.copy()
    for position in positions:
        corrected[position - 1] ^= 1
    logger.debug(f"{code.name}: corrected bits {list(positions)}")
    return CheckResult(CheckStatus.CORRECTED, list(positions), corrected)
