// Univariate factorization over Q: squarefree split, distinct/equal degree
// factorization modulo a small prime, quadratic Hensel lifting past the
// Mignotte bound, subset recombination.

#include "lab/factor.hpp"

#include <algorithm>
#include <cstdint>

#include "lab/errors.hpp"

namespace lab {

namespace {

// ----------------------------------------------------------- Z/p polynomials
// p < 2^31 so products of residues fit in uint64.

using ZpPoly = std::vector<uint64_t>;

struct Zp {
    uint64_t p;

    uint64_t add(uint64_t a, uint64_t b) const { return (a + b) % p; }
    uint64_t sub(uint64_t a, uint64_t b) const { return (a + p - b) % p; }
    uint64_t mul(uint64_t a, uint64_t b) const { return a * b % p; }
    uint64_t pow(uint64_t a, uint64_t e) const {
        uint64_t r = 1;
        a %= p;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    uint64_t inv(uint64_t a) const { return pow(a, p - 2); }

    static void trim(ZpPoly& f) {
        while (!f.empty() && f.back() == 0) f.pop_back();
    }
    int deg(const ZpPoly& f) const { return static_cast<int>(f.size()) - 1; }

    ZpPoly mul(const ZpPoly& a, const ZpPoly& b) const {
        if (a.empty() || b.empty()) return {};
        ZpPoly r(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
        }
        trim(r);
        return r;
    }

    ZpPoly sub(const ZpPoly& a, const ZpPoly& b) const {
        ZpPoly r(std::max(a.size(), b.size()), 0);
        for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (size_t i = 0; i < b.size(); ++i) r[i] = sub(r[i], b[i]);
        trim(r);
        return r;
    }

    ZpPoly scal(const ZpPoly& a, uint64_t c) const {
        ZpPoly r = a;
        for (auto& v : r) v = mul(v, c);
        trim(r);
        return r;
    }

    ZpPoly monic(const ZpPoly& a) const {
        if (a.empty()) return a;
        return scal(a, inv(a.back()));
    }

    ZpPoly rem(ZpPoly a, const ZpPoly& b) const {
        int db = deg(b);
        uint64_t li = inv(b.back());
        while (deg(a) >= db) {
            uint64_t f = mul(a.back(), li);
            size_t k = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) a[k + i] = sub(a[k + i], mul(f, b[i]));
            trim(a);
        }
        return a;
    }

    std::pair<ZpPoly, ZpPoly> divrem(ZpPoly a, const ZpPoly& b) const {
        int db = deg(b);
        uint64_t li = inv(b.back());
        if (deg(a) < db) return {{}, a};
        ZpPoly q(a.size() - b.size() + 1, 0);
        while (deg(a) >= db) {
            uint64_t f = mul(a.back(), li);
            size_t k = a.size() - b.size();
            q[k] = f;
            for (size_t i = 0; i < b.size(); ++i) a[k + i] = sub(a[k + i], mul(f, b[i]));
            trim(a);
        }
        trim(q);
        return {q, a};
    }

    ZpPoly gcd(ZpPoly a, ZpPoly b) const {
        while (!b.empty()) {
            a = rem(std::move(a), b);
            std::swap(a, b);
        }
        return monic(a);
    }

    ZpPoly deriv(const ZpPoly& a) const {
        if (a.size() <= 1) return {};
        ZpPoly d(a.size() - 1);
        for (size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * (i % p) % p;
        trim(d);
        return d;
    }

    // g^e mod f, e given as mpz
    ZpPoly powmod(ZpPoly g, const mpz_class& e, const ZpPoly& f) const {
        ZpPoly r{1};
        g = rem(std::move(g), f);
        for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
            r = rem(mul(r, r), f);
            if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) r = rem(mul(r, g), f);
        }
        return r;
    }

    // extended euclid: s a + t b = 1 for coprime a, b
    void bezout(const ZpPoly& a, const ZpPoly& b, ZpPoly& s, ZpPoly& t) const {
        ZpPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
        while (!r1.empty()) {
            auto [q, r2] = divrem(r0, r1);
            ZpPoly s2 = sub(s0, mul(q, s1));
            ZpPoly t2 = sub(t0, mul(q, t1));
            r0 = std::move(r1);
            r1 = std::move(r2);
            s0 = std::move(s1);
            s1 = std::move(s2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (deg(r0) != 0) throw error("bezout: inputs not coprime");
        uint64_t c = inv(r0[0]);
        s = scal(s0, c);
        t = scal(t0, c);
    }
};

ZpPoly to_zp(const PolyZ& f, uint64_t p) {
    ZpPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        mpz_class m = f[i] % static_cast<long>(p);
        if (m < 0) m += static_cast<long>(p);
        r[i] = m.get_ui();
    }
    Zp::trim(r);
    return r;
}

// ------------------------------------------- distinct / equal degree splits

// deterministic PRNG for the Cantor-Zassenhaus splitting
struct SplitRng {
    uint64_t state;
    uint64_t next() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return state >> 11;
    }
};

void edf(const Zp& zp, const ZpPoly& f, int d, SplitRng& rng, std::vector<ZpPoly>& out) {
    int n = zp.deg(f);
    if (n == d) {
        out.push_back(zp.monic(f));
        return;
    }
    // random r, split on gcd(f, r^((p^d-1)/2) - 1)
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(zp.p), static_cast<unsigned long>(d));
    e = (e - 1) / 2;
    while (true) {
        ZpPoly r(static_cast<size_t>(n), 0);
        for (auto& c : r) c = rng.next() % zp.p;
        Zp::trim(r);
        if (zp.deg(r) < 1) continue;
        ZpPoly b = zp.powmod(r, e, f);
        if (b.empty()) continue;
        b[0] = zp.sub(b[0], 1);
        Zp::trim(b);
        ZpPoly g = zp.gcd(b, f);
        int dg = zp.deg(g);
        if (dg <= 0 || dg >= n) continue;
        edf(zp, g, d, rng, out);
        edf(zp, zp.divrem(f, g).first, d, rng, out);
        return;
    }
}

// monic modular factors of a squarefree monic f mod p
std::vector<ZpPoly> factor_mod_p(const Zp& zp, ZpPoly f) {
    std::vector<ZpPoly> out;
    f = zp.monic(f);
    SplitRng rng{0x9e3779b97f4a7c15ull ^ (zp.p * 0x100000001b3ull)};
    ZpPoly h{0, 1};  // x
    ZpPoly x{0, 1};
    int d = 0;
    while (zp.deg(f) > 0) {
        ++d;
        if (2 * d > zp.deg(f)) {
            out.push_back(zp.monic(f));
            break;
        }
        h = zp.powmod(h, mpz_class(static_cast<long>(zp.p)), f);
        ZpPoly g = zp.gcd(zp.sub(h, x), f);
        if (zp.deg(g) > 0) {
            edf(zp, g, d, rng, out);
            f = zp.divrem(f, g).first;
            h = zp.rem(h, f);
        }
    }
    return out;
}

// --------------------------------------------------- lifting modulo p^(2^k)

using PolyM = std::vector<mpz_class>;  // residues in [0, m)

void polym_trim(PolyM& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

PolyM polym_reduce(const PolyZ& f, const mpz_class& m) {
    PolyM r(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        mpz_mod(r[i].get_mpz_t(), f[i].get_mpz_t(), m.get_mpz_t());
    }
    polym_trim(r);
    return r;
}

PolyM polym_mul(const PolyM& a, const PolyM& b, const mpz_class& m) {
    if (a.empty() || b.empty()) return {};
    PolyM r(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    for (auto& c : r) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    polym_trim(r);
    return r;
}

PolyM polym_add(const PolyM& a, const PolyM& b, const mpz_class& m) {
    PolyM r(std::max(a.size(), b.size()), mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    for (auto& c : r) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    polym_trim(r);
    return r;
}

PolyM polym_sub(const PolyM& a, const PolyM& b, const mpz_class& m) {
    PolyM r(std::max(a.size(), b.size()), mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    for (auto& c : r) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    polym_trim(r);
    return r;
}

// divrem by a monic divisor mod m
std::pair<PolyM, PolyM> polym_divrem_monic(PolyM a, const PolyM& b, const mpz_class& m) {
    int db = static_cast<int>(b.size()) - 1;
    if (static_cast<int>(a.size()) - 1 < db) return {{}, a};
    PolyM q(a.size() - b.size() + 1, mpz_class(0));
    while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
        mpz_class f = a.back();
        size_t k = a.size() - b.size();
        q[k] = f;
        for (size_t i = 0; i < b.size(); ++i) {
            a[k + i] -= f * b[i];
            mpz_mod(a[k + i].get_mpz_t(), a[k + i].get_mpz_t(), m.get_mpz_t());
        }
        polym_trim(a);
        if (!a.empty() && static_cast<int>(a.size()) - 1 == db + static_cast<int>(k) )
            throw error("polym_divrem_monic: leading term failed to cancel");
    }
    polym_trim(q);
    return {q, a};
}

struct HenselPair {
    PolyM g, h, s, t;
    mpz_class m;
};

// one quadratic Hensel step: from mod m to mod m^2
void hensel_step(HenselPair& hp, const PolyZ& f) {
    mpz_class m2 = hp.m * hp.m;
    PolyM fm = polym_reduce(f, m2);
    PolyM e = polym_sub(fm, polym_mul(hp.g, hp.h, m2), m2);
    auto [q, r] = polym_divrem_monic(polym_mul(hp.s, e, m2), hp.h, m2);
    PolyM g2 = polym_add(hp.g, polym_add(polym_mul(hp.t, e, m2), polym_mul(q, hp.g, m2), m2), m2);
    PolyM h2 = polym_add(hp.h, r, m2);
    PolyM one{mpz_class(1)};
    PolyM b = polym_sub(
        polym_add(polym_mul(hp.s, g2, m2), polym_mul(hp.t, h2, m2), m2), one, m2);
    auto [c, d] = polym_divrem_monic(polym_mul(hp.s, b, m2), h2, m2);
    PolyM s2 = polym_sub(hp.s, d, m2);
    PolyM t2 = polym_sub(hp.t, polym_add(polym_mul(hp.t, b, m2), polym_mul(c, g2, m2), m2), m2);
    hp = {std::move(g2), std::move(h2), std::move(s2), std::move(t2), m2};
}

// lift the modular factor list of the squarefree primitive f to mod >= target;
// returns monic factors mod M and M itself
std::pair<std::vector<PolyM>, mpz_class> hensel_lift_list(const PolyZ& f,
                                                          std::vector<ZpPoly> mods, uint64_t p,
                                                          const mpz_class& target) {
    std::vector<PolyM> out;
    mpz_class M = static_cast<long>(p);
    while (M < target) M *= M;  // final modulus every factor is lifted to

    PolyZ cur = f;
    Zp zp{p};
    while (mods.size() > 1) {
        // split off the first modular factor
        ZpPoly u1 = mods.front();
        ZpPoly rest{1};
        for (size_t i = 1; i < mods.size(); ++i) rest = zp.mul(rest, mods[i]);
        mpz_class lc = cur.back();
        // g0 = lc * u1, h0 = rest (monic), f == g0 h0 mod p
        ZpPoly g0 = zp.scal(u1, [&] {
            mpz_class r = lc % static_cast<long>(p);
            if (r < 0) r += static_cast<long>(p);
            return r.get_ui();
        }());
        ZpPoly s, t;
        zp.bezout(g0, rest, s, t);
        HenselPair hp;
        hp.m = static_cast<long>(p);
        auto zp_to_m = [](const ZpPoly& a) {
            PolyM r(a.size());
            for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<unsigned long>(a[i]);
            return r;
        };
        hp.g = zp_to_m(g0);
        hp.h = zp_to_m(rest);
        hp.s = zp_to_m(s);
        hp.t = zp_to_m(t);
        while (hp.m < M) hensel_step(hp, cur);
        // first factor: monic normalization of g mod M
        mpz_class lc_inv;
        mpz_class g_lc = hp.g.back();
        if (mpz_invert(lc_inv.get_mpz_t(), g_lc.get_mpz_t(), hp.m.get_mpz_t()) == 0)
            throw error("hensel: leading coefficient not invertible");
        PolyM w = hp.g;
        for (auto& c : w) {
            c *= lc_inv;
            mpz_mod(c.get_mpz_t(), c.get_mpz_t(), hp.m.get_mpz_t());
        }
        if (hp.m != M) throw error("hensel: modulus mismatch");
        out.push_back(std::move(w));
        // continue with the monic cofactor lifted mod M
        PolyZ curh(hp.h.size());
        for (size_t i = 0; i < hp.h.size(); ++i) curh[i] = hp.h[i];
        cur = std::move(curh);
        mods.erase(mods.begin());
    }
    // last factor: cur itself is monic mod M (or the full remaining part)
    out.push_back(polym_reduce(cur, M));
    return {out, M};
}

// --------------------------------------------------------- recombination

mpz_class symmetric_mod(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    if (2 * r > m) r -= m;
    return r;
}

PolyZ symmetric_poly(const PolyM& a, const mpz_class& m) {
    PolyZ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = symmetric_mod(a[i], m);
    polyz_normalize(r);
    return r;
}

bool polyz_divides(const PolyZ& d, const PolyZ& f) {
    auto [q, r] = divrem(PolyQ::from_integer_coeffs(f), PolyQ::from_integer_coeffs(d));
    (void)q;
    return r.is_zero();
}

PolyZ polyz_divexact_(const PolyZ& f, const PolyZ& d) {
    PolyQ q = divexact(PolyQ::from_integer_coeffs(f), PolyQ::from_integer_coeffs(d));
    auto [c, z] = q.content_primitive();
    if (c < 0)
        for (auto& v : z) v = -v;
    mpq_class cc = c > 0 ? c : -c;
    if (cc.get_den() != 1) throw error("polyz_divexact_: non-integer quotient");
    for (auto& v : z) v *= cc.get_num();
    return z;
}

// Mignotte-style coefficient bound for factors of f times lc(f)
mpz_class factor_coeff_bound(const PolyZ& f) {
    // 2^n * sqrt(n+1) * max|c| * |lc|
    mpz_class maxc = 0;
    for (const auto& c : f) {
        mpz_class a = ::abs(c);
        if (a > maxc) maxc = a;
    }
    int n = polyz_degree(f);
    mpz_class b = maxc * ::abs(f.back());
    mpz_class s = static_cast<long>(n + 2);
    mpz_class sq;
    mpz_sqrt(sq.get_mpz_t(), s.get_mpz_t());
    b *= sq + 1;
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), 2, static_cast<unsigned long>(n + 1));
    return b * pw;
}

// factor a primitive squarefree integer polynomial of degree >= 1
std::vector<PolyZ> zassenhaus(PolyZ f) {
    std::vector<PolyZ> out;
    if (polyz_degree(f) == 1) {
        out.push_back(polyz_primitive(f));
        return out;
    }

    // prime selection: smallest factor count among a few good primes
    struct Cand {
        uint64_t p;
        std::vector<ZpPoly> mods;
    };
    std::optional<Cand> best;
    int tried = 0;
    for (uint64_t p = 1031; tried < 5; p += 2) {
        mpz_class pz(static_cast<unsigned long>(p));
        if (!mpz_probab_prime_p(pz.get_mpz_t(), 30)) continue;
        if (mpz_divisible_p(f.back().get_mpz_t(), pz.get_mpz_t())) continue;
        Zp zp{p};
        ZpPoly fp = to_zp(f, p);
        if (zp.deg(fp) != polyz_degree(f)) continue;
        ZpPoly g = zp.gcd(fp, zp.deriv(fp));
        if (zp.deg(g) != 0) continue;  // not squarefree mod p
        ++tried;
        auto mods = factor_mod_p(zp, fp);
        std::sort(mods.begin(), mods.end());
        if (!best || mods.size() < best->mods.size()) best = Cand{p, std::move(mods)};
        if (best->mods.size() == 1) break;
    }
    if (!best) throw error("zassenhaus: no usable prime found");
    if (best->mods.size() == 1) {
        out.push_back(polyz_primitive(f));
        return out;
    }

    mpz_class bound = 2 * factor_coeff_bound(f) + 1;
    auto [lifted, M] = hensel_lift_list(f, best->mods, best->p, bound);

    // subset search over the lifted modular factors
    std::vector<PolyM> pool = std::move(lifted);
    auto try_extract = [&](const std::vector<size_t>& subset) -> bool {
        mpz_class lc = f.back();
        PolyM prod{lc % M};
        if (prod[0] < 0) prod[0] += M;
        for (size_t i : subset) prod = polym_mul(prod, pool[i], M);
        PolyZ cand = symmetric_poly(prod, M);
        cand = polyz_primitive(cand);
        if (polyz_degree(cand) < 1) return false;
        if (!polyz_divides(cand, f)) return false;
        out.push_back(cand);
        f = polyz_divexact_(f, cand);
        std::vector<PolyM> rest;
        for (size_t i = 0; i < pool.size(); ++i)
            if (std::find(subset.begin(), subset.end(), i) == subset.end())
                rest.push_back(std::move(pool[i]));
        pool = std::move(rest);
        return true;
    };

    bool progress = true;
    while (progress && !pool.empty()) {
        progress = false;
        for (size_t card = 1; card <= pool.size() / 2 && !progress; ++card) {
            // lexicographic combinations of the given cardinality
            std::vector<size_t> idx(card);
            for (size_t i = 0; i < card; ++i) idx[i] = i;
            while (true) {
                size_t degsum = 0;
                for (size_t i : idx) degsum += pool[i].size() - 1;
                if (degsum < static_cast<size_t>(polyz_degree(f)) && try_extract(idx)) {
                    progress = true;
                    break;
                }
                // next combination
                size_t k = card;
                while (k > 0 && idx[k - 1] == pool.size() - card + (k - 1)) --k;
                if (k == 0) break;
                ++idx[k - 1];
                for (size_t i = k; i < card; ++i) idx[i] = idx[i - 1] + 1;
            }
        }
    }
    if (polyz_degree(f) >= 1) out.push_back(polyz_primitive(f));
    return out;
}

}  // namespace

PolyQ Factorization::expand() const {
    PolyQ r = PolyQ::constant(content);
    for (const auto& [f, m] : factors) r = r * pow(f, m);
    return r;
}

Factorization factor_over_q(const PolyQ& p) {
    if (p.is_zero()) throw domain_error("factor_over_q: zero polynomial");
    Factorization out;
    auto [content, fz] = p.content_primitive();
    out.content = content;
    if (polyz_degree(fz) < 1) return out;

    // distinct part, then multiplicities by repeated exact division
    PolyQ f = PolyQ::from_integer_coeffs(fz);
    PolyQ sf = squarefree_part(f);
    auto [sc, sfz] = sf.content_primitive();
    (void)sc;
    std::vector<PolyZ> irr = zassenhaus(sfz);

    for (const auto& gz : irr) {
        PolyQ g = PolyQ::from_integer_coeffs(gz);
        unsigned mult = 0;
        while (true) {
            auto [q, r] = divrem(f, g);
            if (!r.is_zero()) break;
            f = q;
            ++mult;
        }
        out.factors.emplace_back(g, mult);
    }
    if (f.degree() != 0)
        throw error("factor_over_q: factor multiplicities do not exhaust the input");

    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return PolyQ::cmp(a.first, b.first) < 0; });
    return out;
}

bool is_irreducible(const PolyQ& p) {
    if (p.degree() < 1) return false;
    Factorization f = factor_over_q(p);
    return f.factors.size() == 1 && f.factors[0].second == 1;
}

bool irreducible_mod_p(const PolyQ& f, unsigned long p) {
    auto [c, z] = f.content_primitive();
    (void)c;
    int n = polyz_degree(z);
    if (n < 1) return false;
    if (p < 3 || p >= (1ul << 31)) throw domain_error("irreducible_mod_p: bad prime");
    if (mpz_divisible_ui_p(z.back().get_mpz_t(), p)) return false;
    Zp zp{p};
    ZpPoly fp = to_zp(z, p);
    fp = zp.monic(fp);
    // Rabin: x^(p^n) == x mod f, and gcd(x^(p^(n/q)) - x, f) = 1 for primes q | n
    ZpPoly x{0, 1};
    auto frob_power = [&](long e) {
        // x^(p^e) mod f
        ZpPoly h = x;
        for (long i = 0; i < e; ++i)
            h = zp.powmod(h, mpz_class(static_cast<unsigned long>(p)), fp);
        return h;
    };
    for (long q = 2; q <= n; ++q) {
        if (n % q != 0) continue;
        bool is_pr = true;
        for (long d = 2; d * d <= q; ++d)
            if (q % d == 0) is_pr = false;
        if (!is_pr) continue;
        ZpPoly h = frob_power(n / q);
        ZpPoly diff = zp.sub(h, x);
        if (zp.deg(zp.gcd(diff, fp)) != 0) return false;
    }
    ZpPoly h = frob_power(n);
    ZpPoly diff = zp.sub(h, x);
    return diff.empty();
}

}  // namespace lab
