"""Arithmetic for a symmetric bilinear group of composite order N = p_sub * q_sub.

Construction: pick a cofactor ell (even) such that field_mod = ell * N - 1 is
prime and field_mod = 3 (mod 4).  The curve y^2 = x^3 + x over F_field_mod is
then supersingular with exactly field_mod + 1 = ell * N points, and the curve
group is cyclic, so multiplying any point by ell lands in the unique order-N
subgroup G.  The target group G_T is the order-N subgroup of F_{field_mod^2}^*
(the extension is F_p[i] with i^2 = -1, a field because -1 is a non-residue
when field_mod = 3 mod 4).

The pairing is the reduced Tate pairing of P against the distortion image
phi(Q) = (-x, i*y) of Q, computed with Miller's algorithm over N followed by
the final exponentiation to (field_mod^2 - 1) / N.  With embedding degree 2,
all vertical-line contributions lie in the base field and are annihilated by
the final exponentiation, so the Miller loop only accumulates chord/tangent
values.

Security note: parameters here are desk scale (32-bit subgroup primes by
default), so N factors instantly.  The point of this module is to make group
behaviour and attacks observable and reproducible, not to protect data.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import gmpy2

from .rng import DetRng, Seed

HASH_COUNTER_BOUND = 1 << 16
DEFAULT_MAX_COFACTOR = 1_000_000
PARAMS_FORMAT = "bgnlab-params/1"


class ParameterSearchError(RuntimeError):
    """Cofactor or generator search exhausted its configured bound."""


class NotOnCurveError(ValueError):
    """A supposed curve point does not satisfy y^2 = x^3 + x."""


@dataclass(frozen=True)
class CurvePoint:
    """Affine point on y^2 = x^3 + x, or the identity (x = y = None)."""

    x: int | None
    y: int | None

    @property
    def is_identity(self) -> bool:
        return self.x is None


IDENTITY = CurvePoint(None, None)


@dataclass(frozen=True)
class GtElement:
    """Element a + b*i of F_{field_mod^2}; pairing outputs lie in the order-N subgroup."""

    a: int
    b: int


GT_ONE = GtElement(1, 0)


@dataclass(frozen=True)
class GroupParams:
    p_sub: int
    q_sub: int
    n_ord: int
    cofactor: int
    field_mod: int
    g: CurvePoint
    u: CurvePoint
    h: CurvePoint
    f: CurvePoint


# ---------------------------------------------------------------------------
# curve group law


def is_on_curve(P: CurvePoint, params: GroupParams) -> bool:
    if P.is_identity:
        return True
    p = params.field_mod
    return (P.y * P.y - (P.x * P.x * P.x + P.x)) % p == 0


def _require_on_curve(P: CurvePoint, params: GroupParams) -> None:
    if not is_on_curve(P, params):
        raise NotOnCurveError(f"point {P} not on y^2 = x^3 + x mod {params.field_mod}")


def point_neg(P: CurvePoint, params: GroupParams) -> CurvePoint:
    if P.is_identity:
        return IDENTITY
    return CurvePoint(P.x, (-P.y) % params.field_mod)


def _add_raw(P: CurvePoint, Q: CurvePoint, p: int) -> CurvePoint:
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    if P.x == Q.x:
        if (P.y + Q.y) % p == 0:
            return IDENTITY
        lam = (3 * P.x * P.x + 1) * pow(2 * P.y, -1, p) % p
    else:
        lam = (Q.y - P.y) * pow(Q.x - P.x, -1, p) % p
    x3 = (lam * lam - P.x - Q.x) % p
    y3 = (lam * (P.x - x3) - P.y) % p
    return CurvePoint(x3, y3)


def point_add(P: CurvePoint, Q: CurvePoint, params: GroupParams) -> CurvePoint:
    _require_on_curve(P, params)
    _require_on_curve(Q, params)
    return _add_raw(P, Q, params.field_mod)


def scalar_mul(k: int, P: CurvePoint, params: GroupParams) -> CurvePoint:
    _require_on_curve(P, params)
    p = params.field_mod
    if k < 0:
        k, P = -k, point_neg(P, params)
    R = IDENTITY
    A = P
    while k:
        if k & 1:
            R = _add_raw(R, A, p)
        A = _add_raw(A, A, p)
        k >>= 1
    return R


# ---------------------------------------------------------------------------
# quadratic-extension helpers (elements are pairs (a, b) meaning a + b*i)


def _fp2_mul(a1, b1, a2, b2, p):
    return (a1 * a2 - b1 * b2) % p, (a1 * b2 + a2 * b1) % p


def _fp2_sqr(a, b, p):
    return (a * a - b * b) % p, (2 * a * b) % p


def _fp2_inv(a, b, p):
    n = pow(a * a + b * b, -1, p)
    return a * n % p, (-b) * n % p


def _fp2_pow(a, b, e, p):
    if e < 0:
        a, b = _fp2_inv(a, b, p)
        e = -e
    ra, rb = 1, 0
    while e:
        if e & 1:
            ra, rb = _fp2_mul(ra, rb, a, b, p)
        a, b = _fp2_sqr(a, b, p)
        e >>= 1
    return ra, rb


def gt_mul(x: GtElement, y: GtElement, params: GroupParams) -> GtElement:
    a, b = _fp2_mul(x.a, x.b, y.a, y.b, params.field_mod)
    return GtElement(a, b)


def gt_inv(x: GtElement, params: GroupParams) -> GtElement:
    a, b = _fp2_inv(x.a, x.b, params.field_mod)
    return GtElement(a, b)


def gt_pow(x: GtElement, e: int, params: GroupParams) -> GtElement:
    a, b = _fp2_pow(x.a, x.b, e, params.field_mod)
    return GtElement(a, b)


# ---------------------------------------------------------------------------
# pairing


def _miller(P: CurvePoint, xq: int, yq: int, params: GroupParams) -> tuple[int, int]:
    """Miller loop over n_ord, evaluating lines at the distortion image (xq, i*yq).

    Vertical lines evaluate into F_p and are skipped; the final exponentiation
    would kill them anyway.  Z passing through the identity (possible when
    ord(P) properly divides N) contributes only such subfield factors.
    """
    p = params.field_mod
    fa, fb = 1, 0
    Zx, Zy, Zinf = P.x, P.y, False

    def step(fa, fb, Zx, Zy, Zinf, Wx, Wy, Winf):
        # multiply f by l_{Z,W}(phi Q), return Z + W
        if Zinf:
            return fa, fb, Wx, Wy, Winf
        if Winf:
            return fa, fb, Zx, Zy, Zinf
        if Zx == Wx and (Zy + Wy) % p == 0:
            return fa, fb, None, None, True  # vertical line, subfield value
        if Zx == Wx:
            lam = (3 * Zx * Zx + 1) * pow(2 * Zy, -1, p) % p
        else:
            lam = (Wy - Zy) * pow(Wx - Zx, -1, p) % p
        la = (-(Zy + lam * (xq - Zx))) % p
        fa, fb = _fp2_mul(fa, fb, la, yq, p)
        x3 = (lam * lam - Zx - Wx) % p
        y3 = (lam * (Zx - x3) - Zy) % p
        return fa, fb, x3, y3, False

    for bit in bin(params.n_ord)[3:]:
        fa, fb = _fp2_sqr(fa, fb, p)
        fa, fb, Zx, Zy, Zinf = step(fa, fb, Zx, Zy, Zinf, Zx, Zy, Zinf)
        if bit == "1":
            fa, fb, Zx, Zy, Zinf = step(fa, fb, Zx, Zy, Zinf, P.x, P.y, False)
    return fa, fb


def pairing(P: CurvePoint, Q: CurvePoint, params: GroupParams) -> GtElement:
    """Reduced Tate pairing e(P, Q) = f_{N,P}(phi(Q))^((field_mod^2 - 1)/N)."""
    _require_on_curve(P, params)
    _require_on_curve(Q, params)
    if P.is_identity or Q.is_identity:
        return GT_ONE
    p = params.field_mod
    fa, fb = _miller(P, (-Q.x) % p, Q.y, params)
    # final exponentiation: f^(p-1) = conj(f)/f, then ^((p+1)/N) = ^cofactor
    ia, ib = _fp2_inv(fa, fb, p)
    ga, gb = _fp2_mul(fa, (-fb) % p, ia, ib, p)
    ra, rb = _fp2_pow(ga, gb, params.cofactor, p)
    return GtElement(ra, rb)


# ---------------------------------------------------------------------------
# hashing to the groups


def _hash_to_curve(label: bytes, field_mod: int, cofactor: int) -> CurvePoint:
    # try-and-increment; the (field_mod+1)/4 exponent is a square root
    # because field_mod = 3 (mod 4)
    p = field_mod
    for j in range(HASH_COUNTER_BOUND):
        digest = hashlib.sha256(label + b"/" + j.to_bytes(4, "big")).digest()
        x = int.from_bytes(digest, "big") % p
        rhs = (x * x * x + x) % p
        y = pow(rhs, (p + 1) // 4, p)
        if (y * y - rhs) % p != 0:
            continue
        P = CurvePoint(x, y)
        R = P
        Q = IDENTITY
        k = cofactor
        while k:
            if k & 1:
                Q = _add_raw(Q, R, p)
            R = _add_raw(R, R, p)
            k >>= 1
        if not Q.is_identity:
            return Q
    raise ParameterSearchError(f"hash-to-curve counter exhausted for label {label!r}")


@lru_cache(maxsize=None)
def _hash_to_g_cached(label: bytes, params: GroupParams) -> CurvePoint:
    return _hash_to_curve(label, params.field_mod, params.cofactor)


def hash_to_g(label: bytes, params: GroupParams) -> CurvePoint:
    """Deterministic hash onto the order-N curve subgroup (cofactor cleared)."""
    return _hash_to_g_cached(bytes(label), params)


@lru_cache(maxsize=None)
def _hash_to_gt_cached(label: bytes, params: GroupParams) -> GtElement:
    return pairing(hash_to_g(label, params), params.g, params)


def hash_to_gt(label: bytes, params: GroupParams) -> GtElement:
    """Hash into G_T as e(H(label), g).

    Pairing a curve hash with g keeps the discrete log of the output unknown
    to every party; exponentiating e(g,g) by a public hash integer would
    publish it.
    """
    return _hash_to_gt_cached(bytes(label), params)


# ---------------------------------------------------------------------------
# small-range discrete log


def dlog_bsgs(base, target, bound: int, params: GroupParams):
    """Baby-step/giant-step: least m in [0, bound) with base^m = target, else None.

    Works over both carrier groups (CurvePoint, GtElement).
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    p = params.field_mod
    if isinstance(base, CurvePoint):
        op = lambda A, B: _add_raw(A, B, p)
        inv = lambda A: A if A.is_identity else CurvePoint(A.x, (-A.y) % p)
        ident = IDENTITY
        _require_on_curve(base, params)
        _require_on_curve(target, params)
    elif isinstance(base, GtElement):
        op = lambda A, B: gt_mul(A, B, params)
        inv = lambda A: gt_inv(A, params)
        ident = GT_ONE
    else:
        raise TypeError(f"unsupported group element: {type(base).__name__}")

    if target == ident:
        return 0
    m = isqrt(bound - 1) + 1
    table = {}
    cur = ident
    for j in range(m):
        table.setdefault(cur, j)
        cur = op(cur, base)
    giant = inv(cur)  # base^(-m)
    y = target
    for i in range((bound + m - 1) // m):
        j = table.get(y)
        if j is not None:
            x = i * m + j
            return x if x < bound else None
        y = op(y, giant)
    return None


# ---------------------------------------------------------------------------
# parameter generation


def _is_prime(n: int) -> bool:
    return bool(gmpy2.is_prime(n))


def _element_order_check(P: CurvePoint, params: GroupParams) -> bool:
    # exact order N: killed by N, not killed by either prime factor
    return (
        scalar_mul(params.n_ord, P, params).is_identity
        and not scalar_mul(params.p_sub, P, params).is_identity
        and not scalar_mul(params.q_sub, P, params).is_identity
    )


def _gt_exact_order_n(x: GtElement, params: GroupParams) -> bool:
    return (
        gt_pow(x, params.n_ord, params) == GT_ONE
        and gt_pow(x, params.p_sub, params) != GT_ONE
        and gt_pow(x, params.q_sub, params) != GT_ONE
    )


def params_from_primes(
    p_sub: int, q_sub: int, *, max_cofactor: int = DEFAULT_MAX_COFACTOR
) -> GroupParams:
    """Deterministically build GroupParams for the given subgroup primes."""
    if p_sub == q_sub:
        raise ValueError("subgroup primes must be distinct")
    if not (_is_prime(p_sub) and _is_prime(q_sub)) or p_sub < 3 or q_sub < 3:
        raise ValueError("subgroup orders must be distinct odd primes")
    n_ord = p_sub * q_sub

    field_mod = None
    cofactor = None
    for ell in range(2, max_cofactor + 1, 2):
        if gcd(ell, n_ord) != 1:
            continue
        cand = ell * n_ord - 1
        if cand % 4 == 3 and _is_prime(cand):
            field_mod, cofactor = cand, ell
            break
    if field_mod is None:
        raise ParameterSearchError(
            f"no suitable cofactor below {max_cofactor} for N = {n_ord}"
        )

    def derive(stem: bytes, order_check) -> CurvePoint:
        for attempt in range(64):
            label = b"bgnlab/gen/" + stem + b"/" + attempt.to_bytes(2, "big")
            P = _hash_to_curve(label, field_mod, cofactor)
            if order_check(P):
                return P
        raise ParameterSearchError(f"no full-order generator found for {stem!r}")

    def full_order(P: CurvePoint) -> bool:
        probe = GroupParams(p_sub, q_sub, n_ord, cofactor, field_mod, P, P, P, P)
        return _element_order_check(P, probe)

    u = derive(b"u", full_order)
    f = derive(b"f", full_order)

    # g additionally needs a non-degenerate self-pairing of exact order N
    for attempt in range(64):
        label = b"bgnlab/gen/g/" + attempt.to_bytes(2, "big")
        g = _hash_to_curve(label, field_mod, cofactor)
        probe = GroupParams(p_sub, q_sub, n_ord, cofactor, field_mod, g, u, u, f)
        if _element_order_check(g, probe) and _gt_exact_order_n(
            pairing(g, g, probe), probe
        ):
            break
    else:
        raise ParameterSearchError("no non-degenerate generator g found")

    h_point = scalar_mul(p_sub, u, probe)
    params = GroupParams(p_sub, q_sub, n_ord, cofactor, field_mod, g, u, h_point, f)
    validate_params(params)
    return params


def _sample_prime(bits: int, rng: DetRng) -> int:
    while True:
        cand = rng.randbits(bits) | (1 << (bits - 1)) | 1
        if _is_prime(cand):
            return cand


def gen_params(
    bits_p: int,
    bits_q: int,
    seed: Seed,
    *,
    max_cofactor: int = DEFAULT_MAX_COFACTOR,
) -> GroupParams:
    """Sample subgroup primes of the requested sizes and build the group."""
    if bits_p < 8 or bits_q < 8:
        raise ValueError("subgroup primes must be at least 8 bits")
    rng = DetRng(seed, b"bgnlab/params")
    p_sub = _sample_prime(bits_p, rng)
    q_sub = _sample_prime(bits_q, rng)
    while q_sub == p_sub:
        q_sub = _sample_prime(bits_q, rng)
    return params_from_primes(p_sub, q_sub, max_cofactor=max_cofactor)


@lru_cache(maxsize=1)
def toy_params() -> GroupParams:
    """The fixed desk preset: p_sub=5, q_sub=7, cofactor=4, field_mod=139."""
    params = params_from_primes(5, 7)
    assert params.field_mod == 139 and params.cofactor == 4
    return params


def validate_params(params: GroupParams) -> None:
    """Check every structural invariant; raises ValueError on the first failure."""
    p, q, n = params.p_sub, params.q_sub, params.n_ord
    fm, ell = params.field_mod, params.cofactor
    checks = [
        (_is_prime(p) and _is_prime(q) and p != q, "subgroup primes"),
        (n == p * q, "n_ord = p_sub * q_sub"),
        (_is_prime(fm), "field_mod prime"),
        (fm % 4 == 3, "field_mod = 3 (mod 4)"),
        (fm + 1 == ell * n, "field_mod + 1 = cofactor * n_ord"),
        (gcd(ell, n) == 1, "gcd(cofactor, n_ord) = 1"),
    ]
    for ok, what in checks:
        if not ok:
            raise ValueError(f"invalid group parameters: {what}")
    for name in ("g", "u", "h", "f"):
        if not is_on_curve(getattr(params, name), params):
            raise ValueError(f"invalid group parameters: {name} off-curve")
    for name in ("g", "u", "f"):
        if not _element_order_check(getattr(params, name), params):
            raise ValueError(f"invalid group parameters: {name} lacks exact order N")
    if params.h.is_identity or not scalar_mul(q, params.h, params).is_identity:
        raise ValueError("invalid group parameters: h lacks exact order q_sub")
    if params.h != scalar_mul(p, params.u, params):
        raise ValueError("invalid group parameters: h != [p_sub]u")
    if not _gt_exact_order_n(pairing(params.g, params.g, params), params):
        raise ValueError("invalid group parameters: pairing(g, g) degenerate")


# ---------------------------------------------------------------------------
# serialization


def _point_text(P: CurvePoint) -> str:
    if P.is_identity:
        return "inf"
    return f"{hex(P.x)},{hex(P.y)}"


def _point_parse(s: str) -> CurvePoint:
    if s == "inf":
        return IDENTITY
    xs, ys = s.split(",")
    return CurvePoint(int(xs, 16), int(ys, 16))


_PARAM_FIELDS = ("p_sub", "q_sub", "n_ord", "cofactor", "field_mod")
_POINT_FIELDS = ("g", "u", "h", "f")


def params_to_text(params: GroupParams) -> str:
    lines = [f"format={PARAMS_FORMAT}"]
    for name in _PARAM_FIELDS:
        lines.append(f"{name}={hex(getattr(params, name))}")
    for name in _POINT_FIELDS:
        lines.append(f"{name}={_point_text(getattr(params, name))}")
    return "\n".join(lines) + "\n"


def params_from_text(text: str) -> GroupParams:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    kv = {}
    for ln in lines:
        key, _, value = ln.partition("=")
        kv[key.strip()] = value.strip()
    if kv.get("format") != PARAMS_FORMAT:
        raise ValueError(f"unsupported parameter format: {kv.get('format')!r}")
    ints = {name: int(kv[name], 16) for name in _PARAM_FIELDS}
    points = {name: _point_parse(kv[name]) for name in _POINT_FIELDS}
    params = GroupParams(**ints, **points)
    validate_params(params)
    return params


def params_digest(params: GroupParams) -> str:
    return hashlib.sha256(params_to_text(params).encode("ascii")).hexdigest()[:16]
