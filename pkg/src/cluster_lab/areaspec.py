"""Area-list specifications with the square-root summability gate.

Every entry point that accepts a (possibly infinite) list of chamber areas
parses it through ``parse_area_spec``, which refuses families whose
square-root series diverges: without a finite sum of sqrt(a_k) there is no
finite-perimeter competitor at all, so no downstream computation is
meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import HypothesisViolatedError, InvalidArgumentError


@dataclass(frozen=True)
class AreaSpec:
    """Truncated area list plus the closed-form tail of the sqrt series."""

    text: str
    areas: tuple[float, ...]
    sqrt_tail: float  # sum of sqrt(a_k) beyond the truncation, closed form

    @property
    def sqrt_sum(self) -> float:
        """Full sum of sqrt(a_k): truncated part plus analytic tail."""
        return sum(math.sqrt(a) for a in self.areas) + self.sqrt_tail


def parse_area_spec(text: str, n_terms: int = 8) -> AreaSpec:
    """Parse an area-list specification.

    Forms:
      ``list:a1,a2,...``  explicit finite list (tail 0)
      ``geom:a,q``        a_k = a * q^k for k >= 1, truncated to ``n_terms``
      ``pow4:n``          a_k = 4^(-k) for k = 1..n (tail in closed form)
      ``invsq``           a_k = k^(-2): rejected, sqrt series diverges

    Raises ``HypothesisViolatedError`` when the sum of sqrt(a_k) diverges
    and ``InvalidArgumentError`` on malformed text.
    """
    text = text.strip()
    if n_terms < 1:
        raise InvalidArgumentError(f"n_terms must be >= 1, got {n_terms}")
    if text.startswith("list:"):
        try:
            areas = tuple(float(tok) for tok in text[5:].split(",") if tok != "")
        except ValueError as exc:
            raise InvalidArgumentError(f"bad list spec {text!r}: {exc}") from exc
        if not areas:
            raise InvalidArgumentError("empty area list")
        if any(a < 0 or not math.isfinite(a) for a in areas):
            raise InvalidArgumentError("areas must be finite and nonnegative")
        return AreaSpec(text, areas, 0.0)
    if text.startswith("geom:"):
        try:
            a_str, q_str = text[5:].split(",")
            a, q = float(a_str), float(q_str)
        except ValueError as exc:
            raise InvalidArgumentError(f"bad geometric spec {text!r}: {exc}") from exc
        if a <= 0 or q <= 0:
            raise InvalidArgumentError("geometric spec needs a > 0 and q > 0")
        if q >= 1.0:
            raise HypothesisViolatedError(
                f"spec {text!r}: sum of sqrt(a_k) = sqrt(a) * sum q^(k/2) "
                f"diverges for ratio q = {q} >= 1"
            )
        areas = tuple(a * q**k for k in range(1, n_terms + 1))
        sq = math.sqrt(q)
        tail = math.sqrt(a) * sq ** (n_terms + 1) / (1.0 - sq)
        return AreaSpec(text, areas, tail)
    if text.startswith("pow4:"):
        try:
            n = int(text[5:])
        except ValueError as exc:
            raise InvalidArgumentError(f"bad pow4 spec {text!r}: {exc}") from exc
        if n < 1:
            raise InvalidArgumentError("pow4 spec needs n >= 1")
        areas = tuple(4.0 ** -k for k in range(1, n + 1))
        # sum_{k>n} 2^-k = 2^-n
        return AreaSpec(text, areas, 2.0 ** -n)
    if text == "invsq":
        raise HypothesisViolatedError(
            "spec 'invsq' (a_k = 1/k^2): sum of sqrt(a_k) = sum 1/k diverges; "
            "the square-root summability hypothesis fails"
        )
    raise InvalidArgumentError(
        f"unrecognized area spec {text!r}; "
        "expected list:..., geom:a,q, pow4:n or invsq"
    )
