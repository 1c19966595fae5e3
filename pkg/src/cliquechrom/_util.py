import math


def ceil_tol(value: float, rel: float = 1e-9) -> int:
    """Ceiling that treats values within ``rel`` of an integer as that integer.

    Keeps exact products such as 6 * 100 * 0.1 or log(10**6) / log(100) from
    rounding up on floating-point noise.
    """
    r = round(value)
    if abs(value - r) <= rel * max(1.0, abs(value)):
        return int(r)
    return math.ceil(value)


def pow1m(p: float, k: float, exponent: float) -> float:
    """(1 - p**k) ** exponent evaluated in log space."""
    q = p ** k
    if q >= 1.0:
        return 0.0 if exponent > 0 else math.inf
    return math.exp(exponent * math.log1p(-q))
