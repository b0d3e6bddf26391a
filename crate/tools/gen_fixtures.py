#!/usr/bin/env python3
"""Regenerate group and coefficient fixtures for prime-level Gamma_0(p).

Independent of the Rust code base:
  * coset enumeration of Gamma_0(p) in SL2(Z) over P^1(F_p) and
    Reidemeister-Schreier generators from the presentation <S, T>;
  * newform coefficients a_n from point counts on the associated
    elliptic curves (Hecke recursion for prime powers, multiplicativity);
  * level 11 cross-checked against the eta product q prod (1-q^n)^2 (1-q^11n)^2;
  * Atkin-Lehner eigenvalues measured numerically with mpmath.

Usage: python3 tools/gen_fixtures.py [out_dir] [N]
"""
import json
import math
import os
import sys

import mpmath

CURVES = {
    # label: (level, [a1, a2, a3, a4, a6])
    "11a": (11, [0, -1, 1, -10, -20]),
    "37a": (37, [0, 0, 1, -1, 0]),
    "37b": (37, [0, 1, 1, -23, -50]),
}
LEVEL_FORMS = {11: ["11a"], 37: ["37a", "37b"]}


def primes_upto(n):
    sieve = [True] * (n + 1)
    sieve[0:2] = [False, False]
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = [False] * len(sieve[i * i :: i])
    return [i for i, v in enumerate(sieve) if v]


def count_points(ainv, p):
    a1, a2, a3, a4, a6 = ainv
    n = 1  # point at infinity
    for x in range(p):
        for y in range(p):
            lhs = (y * y + a1 * x * y + a3 * y) % p
            rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
            if lhs == rhs:
                n += 1
    return n


def newform_coefficients(label, nmax):
    level, ainv = CURVES[label]
    ap = {}
    for p in primes_upto(nmax):
        ap[p] = p + 1 - count_points(ainv, p)
    a = [0] * (nmax + 1)
    a[1] = 1
    # prime powers
    for p in ap:
        pk, prev2, prev1 = p, 1, ap[p]
        a[p] = prev1
        while pk * p <= nmax:
            pk *= p
            if level % p == 0:
                cur = prev1 * ap[p]
            else:
                cur = ap[p] * prev1 - p * prev2
            a[pk] = cur
            prev2, prev1 = prev1, cur
    for n in range(2, nmax + 1):
        m, rest, res = n, 1, 1
        for p in primes_upto(int(math.isqrt(n)) + 1):
            if m % p == 0:
                pk = 1
                while m % p == 0:
                    m //= p
                    pk *= p
                res *= a[pk]
        if m > 1:
            res *= a[m]
        a[n] = res
    return a[1:]


def eta_product_11(nmax):
    coeffs = [0] * (nmax + 2)
    coeffs[0] = 1
    series = coeffs[:]

    def mul_factor(s, step):
        # multiply by (1 - q^step)
        out = s[:]
        for i in range(step, len(s)):
            out[i] -= s[i - step]
        return out

    for n in range(1, nmax + 1):
        series = mul_factor(series, n)
        series = mul_factor(series, n)
        if 11 * n <= nmax:
            series = mul_factor(series, 11 * n)
            series = mul_factor(series, 11 * n)
    # q * series
    return series[: nmax]


def atkin_lehner_sign(coeffs, p):
    mpmath.mp.dps = 30
    z = mpmath.mpc(0.13, 1.0 / math.sqrt(p) * 1.07)

    def f(w):
        q = mpmath.exp(2j * mpmath.pi * w)
        return sum(c * q ** (n + 1) for n, c in enumerate(coeffs))

    lhs = f(-1 / (p * z))
    rhs = p * z * z * f(z)
    ratio = lhs / rhs
    sign = int(round(float(ratio.real)))
    assert abs(ratio - sign) < 1e-12, ratio
    return sign


# ---------- group data ----------

def mat_mul(a, b):
    return [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]


def mat_inv(a):
    return [a[3], -a[1], -a[2], a[0]]


def normalize(a):
    # canonical representative of +-a in PSL2(Z)
    for x in a:
        if x != 0:
            return a if x > 0 else [-y for y in a]
    return a


S = [0, -1, 1, 0]
T = [1, 1, 0, 1]
GENS = {"S": S, "T": T, "s": mat_inv(S), "t": mat_inv(T)}


def p1_normal(c, d, p):
    c, d = c % p, d % p
    if c == 0:
        return (0, 1)
    inv = pow(c, -1, p)
    return (1, (d * inv) % p)


def coset_of(m, p):
    return p1_normal(m[2], m[3], p)


def schreier(p):
    start = (0, 1)
    reps = {start: [1, 0, 0, 1]}
    words = {start: ""}
    queue = [start]
    while queue:
        x = queue.pop(0)
        for letter in "TS":
            m = mat_mul(reps[x], GENS[letter])
            y = coset_of(m, p)
            if y not in reps:
                reps[y] = m
                words[y] = words[x] + letter
                queue.append(y)
    gens = []
    index = {}
    for x in sorted(reps):
        for letter in "TS":
            m = mat_mul(reps[x], GENS[letter])
            y = coset_of(m, p)
            h = normalize(mat_mul(m, mat_inv(reps[y])))
            assert h[2] % p == 0
            if h == [1, 0, 0, 1]:
                continue
            key = tuple(h)
            ikey = tuple(normalize(mat_inv(h)))
            if key in index or ikey in index:
                continue
            index[key] = len(gens)
            gens.append(h)
    return reps, gens, index


def rewrite(word, reps, gens, index, p):
    """Rewrite a word in S,T,s,t (an element of Gamma_0(p)) as signed generator indices."""
    x = (0, 1)
    out = []
    for letter in word:
        m = mat_mul(reps[x], GENS[letter])
        y = coset_of(m, p)
        h = normalize(mat_mul(m, mat_inv(reps[y])))
        if h != [1, 0, 0, 1]:
            key = tuple(h)
            if key in index:
                out.append(index[key] + 1)
            else:
                out.append(-(index[tuple(normalize(mat_inv(h)))] + 1))
        x = y
    assert x == (0, 1)
    return out


def eval_word(word, gens):
    m = [1, 0, 0, 1]
    for w in word:
        g = gens[abs(w) - 1]
        m = mat_mul(m, g if w > 0 else mat_inv(g))
    return normalize(m)


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def gamma0_invariants(p):
    index = p + 1
    nu2 = 1 + legendre(-1, p)
    nu3 = 1 + legendre(-3, p)
    cusps = 2
    from fractions import Fraction
    genus = 1 + Fraction(index, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(cusps, 2)
    assert genus.denominator == 1
    return int(genus), cusps, nu2, nu3


def cusp_dim(k, genus, cusps, nu2, nu3):
    if k == 2:
        return genus
    return (k - 1) * (genus - 1) + (k // 2 - 1) * cusps + nu2 * (k // 4) + nu3 * (k // 3)


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    nmax = int(sys.argv[2]) if len(sys.argv) > 2 else 400
    os.makedirs(out, exist_ok=True)

    eta = eta_product_11(nmax)
    for level, labels in LEVEL_FORMS.items():
        genus, cusps, nu2, nu3 = gamma0_invariants(level)
        assert genus == len(labels)
        forms = []
        for label in labels:
            a = newform_coefficients(label, nmax)
            if label == "11a":
                assert a == eta, "eta product disagrees with point counts"
            sign = atkin_lehner_sign(a, level)
            path = f"{label}.coeffs"
            with open(os.path.join(out, path), "w") as fh:
                fh.write(f"# hoforms-coeffs/1 label={label} weight=2 level={level} N={nmax}\n")
                for c in a:
                    fh.write(f"{c}\n")
            forms.append({"label": label, "file": path, "atkin_lehner": sign})

        reps, gens, index = schreier(level)
        pi_inf = [1, 1, 0, 1]
        pi_zero = [1, 0, -level, 1]
        word_inf = rewrite("T", reps, gens, index, level)
        word_zero = rewrite("S" + "T" * level + "s", reps, gens, index, level)
        assert eval_word(word_inf, gens) == normalize(pi_inf)
        assert eval_word(word_zero, gens) == normalize(pi_zero)

        group = {
            "format": "hoforms-group/1",
            "label": f"Gamma0({level})",
            "level": level,
            "genus": genus,
            "cusps": [
                {"label": "inf", "representative": "inf", "width": 1,
                 "scaling": [1, 0, 0, 1], "parabolic": pi_inf, "parabolic_word": word_inf},
                {"label": "0", "representative": "0", "width": level,
                 "scaling": [0, -1, 1, 0], "parabolic": pi_zero, "parabolic_word": word_zero},
            ],
            "generators": gens,
            "forms": forms,
            "cusp_form_dims": {str(k): cusp_dim(k, genus, cusps, nu2, nu3) for k in (2, 4, 6)},
        }
        with open(os.path.join(out, f"gamma0_{level}.json"), "w") as fh:
            json.dump(group, fh, indent=2)
            fh.write("\n")
        print(f"level {level}: genus {genus}, {len(gens)} generators, forms {[f['label'] for f in forms]}")


if __name__ == "__main__":
    main()
