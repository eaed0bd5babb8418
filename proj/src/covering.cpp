#include "lab/covering.hpp"

#include <json.hpp>

#include <algorithm>

#include "lab/errors.hpp"
#include "lab/rational.hpp"

namespace lab {

void DetParams::validate() const {
    if (delta < 1) throw domain_error("DetParams: delta >= 1 required");
    if (d < 1) throw domain_error("DetParams: d >= 1 required");
    Real one = Real::from_int(1, T.prec());
    if (Real::certainly_lt(T, one)) throw domain_error("DetParams: T >= 1 required");
    // L >= 1/T^{4d}
    Real lhs = pow_si(T, 4 * d, T.prec());
    if (Real::certainly_lt(mul(L, lhs, T.prec()), one))
        throw domain_error("DetParams: L >= 1/T^{4d} required");
}

// ------------------------------------------------------------- oracles

SmoothFunctionOracle oracle_quadratic() {
    SmoothFunctionOracle o;
    o.name = "x^2";
    o.lo = 0;
    o.hi = 1;
    o.derivative_sup_bounds = {mpq_class(1), mpq_class(2), mpq_class(1)};
    o.derivative_sup_bounds.resize(25, mpq_class(0));  // higher orders vanish
    o.eval = [](const Real& x, int order, mpfr_prec_t prec) -> Real {
        switch (order) {
            case 0: return mul(x, x, prec);
            case 1: return mul_2si(add(x, Real(prec), prec), 1);
            case 2: return Real::from_int(2, prec);
            default: return Real(prec);
        }
    };
    return o;
}

SmoothFunctionOracle oracle_cubic_minus_x() {
    SmoothFunctionOracle o;
    o.name = "x^3-x";
    o.lo = 0;
    o.hi = 1;
    o.derivative_sup_bounds = {mpq_class(1), mpq_class(2), mpq_class(3), mpq_class(1)};
    o.derivative_sup_bounds.resize(25, mpq_class(0));  // higher orders vanish
    o.eval = [](const Real& x, int order, mpfr_prec_t prec) -> Real {
        switch (order) {
            case 0: return sub(mul(mul(x, x, prec), x, prec), x, prec);
            case 1:
                return sub(mul(Real::from_int(3, prec), mul(x, x, prec), prec),
                           Real::from_int(1, prec), prec);
            case 2: return mul(Real::from_int(6, prec), x, prec);
            case 3: return Real::from_int(6, prec);
            default: return Real(prec);
        }
    };
    return o;
}

SmoothFunctionOracle oracle_cos2pi(const mpq_class& lo, const mpq_class& hi) {
    SmoothFunctionOracle o;
    o.name = "cos(2 pi x)";
    o.lo = lo;
    o.hi = hi;
    // |f^(j)|/j! <= (2 pi)^j / j! < (44/7)^j / j!
    mpq_class pw(1), fact(1);
    for (int j = 0; j <= 24; ++j) {
        o.derivative_sup_bounds.push_back(pw / fact);
        pw *= mpq_class(44, 7);
        fact *= (j + 1);
    }
    o.eval = [](const Real& x, int order, mpfr_prec_t prec) -> Real {
        mpfr_prec_t wp = prec + 16;
        Real twopi = mul_2si(Real::pi(wp), 1);
        // f^(j)(x) = (2pi)^j cos(2 pi x + j pi/2)
        Real arg = mul(twopi, x, wp);
        Real quarter = mul(Real::pi(wp), Real::from_mpq(mpq_class(order, 2), wp), wp);
        Real v = cos(add(arg, quarter, wp), wp);
        return mul(pow_si(twopi, order, wp), v, prec);
    };
    return o;
}

// ------------------------------------------------------------- formulas

namespace {

Real factorial_power(long D, long d, mpfr_prec_t wp) {
    // (D!)^{2d/(D(D-1))}
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(D));
    Real lf = log(Real::from_mpz(f, wp), wp);
    Real ex = div(Real::from_int(2 * d, wp), Real::from_int(D * (D - 1), wp), wp);
    return exp(mul(ex, lf, wp), wp);
}

Real lt4d_power(const DetParams& p, mpfr_prec_t wp) {
    // (L T^{4d})^{4/(3(delta+3))}
    Real base = mul(p.L, pow_si(p.T, 4 * p.d, wp), wp);
    Real ex = div(Real::from_int(4, wp), Real::from_int(3 * (p.delta + 3), wp), wp);
    return pow(base, ex, wp);
}

}  // namespace

Real lemma_count_bound(const DetParams& p, const Real& A, mpfr_prec_t prec) {
    p.validate();
    mpfr_prec_t wp = prec + 32;
    Real v = mul(Real::from_int(6, wp), factorial_power(p.D(), p.d, wp), wp);
    v = mul(v, lt4d_power(p, wp), wp);
    return mul(v, A, prec);
}

Real prop_count_bound(const DetParams& p, mpfr_prec_t prec) {
    p.validate();
    mpfr_prec_t wp = prec + 32;
    Real e1 = Real::euler_e(wp);
    if (Real::certainly_lt(p.T, e1)) throw domain_error("prop_count_bound: T >= e required");
    Real v = mul(Real::from_int(54 * p.D(), wp), factorial_power(p.D(), p.d, wp), wp);
    v = mul(v, lt4d_power(p, wp), wp);
    Real lg = log(mul(e1, mul(p.L, pow_si(p.T, 4 * p.d, wp), wp), wp), wp);
    return mul(v, lg, prec);
}

Real subinterval_length(const DetParams& p, const SmoothFunctionOracle& oracle,
                        mpfr_prec_t prec) {
    p.validate();
    const long D = p.D();
    if (static_cast<long>(oracle.derivative_sup_bounds.size()) < D)
        throw domain_error("subinterval_length: oracle lacks derivative bounds up to order D-1");
    mpfr_prec_t wp = prec + 32;
    // X = max(1, sup|x|), B = max(1, B_0..B_{D-1})
    mpq_class X = std::max<mpq_class>(
        {mpq_class(1), mpq_class(::abs(oracle.lo)), mpq_class(::abs(oracle.hi))});
    mpq_class B(1);
    for (long j = 0; j < D; ++j) {
        const mpq_class& bj = oracle.derivative_sup_bounds[j];
        if (bj < 0) throw domain_error("subinterval_length: negative derivative bound");
        if (bj > B) B = bj;
    }
    // l = (1/4) (D!)^{-2/(D(D-1))} (4 X B T^2)^{-4/(delta+3)}
    Real fp = factorial_power(D, p.d, wp);
    Real base = mul(Real::from_mpq(4 * X * B, wp), mul(p.T, p.T, wp), wp);
    Real ex = div(Real::from_int(-4 * p.d, wp), Real::from_int(p.delta + 3, wp), wp);
    Real l = div(pow(base, ex, wp), mul_2si(fp, 2), wp);
    return min(l, p.L, prec);
}

// ------------------------------------------------------------- curves

namespace {

std::vector<std::pair<long, long>> monomials_graded_lex(long delta) {
    std::vector<std::pair<long, long>> out;
    for (long t = 0; t <= delta; ++t)
        for (long i = t; i >= 0; --i) out.emplace_back(i, t - i);
    return out;
}

PlaneCurve fit_curve(const std::vector<std::pair<mpq_class, mpq_class>>& pts, long delta,
                     int part_for_error) {
    auto mons = monomials_graded_lex(delta);
    const size_t D = mons.size();
    PlaneCurve curve;
    curve.delta = delta;
    if (pts.empty()) {
        curve.coeffs[{0, 0}] = 1;  // the never-vanishing default for empty parts
        return curve;
    }
    // rows: one per point, columns: monomials
    std::vector<std::vector<mpq_class>> m(pts.size(), std::vector<mpq_class>(D));
    for (size_t r = 0; r < pts.size(); ++r) {
        const auto& [x, y] = pts[r];
        std::vector<mpq_class> xp(delta + 1), yp(delta + 1);
        xp[0] = yp[0] = 1;
        for (long k = 1; k <= delta; ++k) {
            xp[k] = xp[k - 1] * x;
            yp[k] = yp[k - 1] * y;
        }
        for (size_t c = 0; c < D; ++c) m[r][c] = xp[mons[c].first] * yp[mons[c].second];
    }
    // Gaussian elimination to reduced row echelon form
    std::vector<long> pivot_of_col(D, -1);
    size_t row = 0;
    for (size_t col = 0; col < D && row < m.size(); ++col) {
        size_t sel = row;
        while (sel < m.size() && m[sel][col] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[row], m[sel]);
        mpq_class inv = m[row][col];
        for (size_t c = col; c < D; ++c) m[row][c] /= inv;
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            mpq_class f = m[r][col];
            for (size_t c = col; c < D; ++c) m[r][c] -= f * m[row][c];
        }
        pivot_of_col[col] = static_cast<long>(row);
        ++row;
    }
    long free_col = -1;
    for (size_t c = 0; c < D; ++c)
        if (pivot_of_col[c] < 0) {
            free_col = static_cast<long>(c);
            break;
        }
    if (free_col < 0)
        throw certificate_error("build_covering: no curve through the points of a part",
                                part_for_error);
    // kernel vector: v[free] = 1, v[pivot col] = -rref[pivot row][free]
    std::vector<mpq_class> v(D, mpq_class(0));
    v[free_col] = 1;
    for (size_t c = 0; c < D; ++c)
        if (pivot_of_col[c] >= 0) v[c] = -m[pivot_of_col[c]][free_col];
    // normalize: first nonzero coefficient in graded-lex order becomes 1
    mpq_class lead;
    for (size_t c = 0; c < D; ++c)
        if (v[c] != 0) {
            lead = v[c];
            break;
        }
    for (size_t c = 0; c < D; ++c) {
        if (v[c] == 0) continue;
        v[c] /= lead;
        curve.coeffs[mons[c]] = v[c];
    }
    return curve;
}

}  // namespace

mpq_class PlaneCurve::evaluate(const mpq_class& x, const mpq_class& y) const {
    mpq_class acc(0);
    for (const auto& [mon, c] : coeffs) {
        mpq_class t = c;
        for (long k = 0; k < mon.first; ++k) t *= x;
        for (long k = 0; k < mon.second; ++k) t *= y;
        acc += t;
    }
    return acc;
}

bool PlaneCurve::vanishes_at(const mpq_class& x, const mpq_class& y) const {
    return evaluate(x, y) == 0;
}

bool CoveringCertificate::verify() const {
    if (parts.size() != curves.size()) return false;
    for (const auto& [x, y] : points) {
        // the part this point was assigned to: the half-open interval rule
        // with boundary points going left
        long idx = -1;
        for (size_t i = 0; i < parts.size(); ++i) {
            bool last = i + 1 == parts.size();
            if (x > parts[i].first && (x < parts[i].second || (last && x <= parts[i].second)))
                idx = static_cast<long>(i);
            if (x == parts[i].first) idx = (i == 0) ? 0 : static_cast<long>(i) - 1;
        }
        if (idx < 0) return false;
        if (!curves[idx].vanishes_at(x, y)) return false;
    }
    return true;
}

CoveringCertificate build_covering(const SmoothFunctionOracle& oracle, const DetParams& p,
                                   const std::vector<std::pair<mpq_class, mpq_class>>& points,
                                   mpfr_prec_t prec) {
    p.validate();
    Real l = subinterval_length(p, oracle, prec);
    mpq_class l_lo;
    mpfr_get_q(l_lo.get_mpq_t(), l.lower().get());
    if (l_lo <= 0) throw domain_error("build_covering: subinterval length not positive");
    mpq_class span = oracle.hi - oracle.lo;
    if (span <= 0) throw domain_error("build_covering: empty domain");
    // number of equal parts: ceil(span / l)
    mpq_class ratio = span / l_lo;
    mpz_class count = ratio.get_num() / ratio.get_den();
    if (mpq_class(count) < ratio) count += 1;
    if (count < 1) count = 1;
    if (count > 5000000) throw domain_error("build_covering: part count exceeds the safety cap");
    long n_parts = static_cast<long>(count.get_si());
    mpq_class len = span / count;

    // precondition: points on the graph with size-height <= T
    mpq_class t_lo;
    mpfr_get_q(t_lo.get_mpq_t(), p.T.lower().get());
    mpfr_prec_t wp = prec + 32;
    for (const auto& [x, y] : points) {
        if (x < oracle.lo || x > oracle.hi)
            throw domain_error("build_covering: point outside the domain");
        if (size_height_rational(x) > t_lo || size_height_rational(y) > t_lo)
            throw domain_error("build_covering: point exceeds the size-height bound");
        Real fx = oracle.value(Real::from_mpq(x, wp), wp);
        if (!fx.contains(y))
            throw domain_error("build_covering: point not on the graph within enclosure");
    }

    CoveringCertificate cert;
    cert.params = p;
    cert.points = points;
    std::vector<std::vector<std::pair<mpq_class, mpq_class>>> buckets(n_parts);
    for (const auto& pt : points) {
        mpq_class off = (pt.first - oracle.lo) / len;
        mpz_class idx = off.get_num() / off.get_den();
        // boundary points belong to the part on the left
        if (mpq_class(idx) == off && idx > 0) idx -= 1;
        if (idx >= n_parts) idx = n_parts - 1;
        buckets[idx.get_si()].push_back(pt);
    }
    for (long i = 0; i < n_parts; ++i) {
        mpq_class a = oracle.lo + i * len;
        mpq_class b = (i + 1 == n_parts) ? oracle.hi : mpq_class(oracle.lo + (i + 1) * len);
        cert.parts.emplace_back(a, b);
        cert.curves.push_back(fit_curve(buckets[i], p.delta, static_cast<int>(i)));
        for (const auto& [x, y] : buckets[i]) {
            if (!cert.curves.back().vanishes_at(x, y))
                throw certificate_error("build_covering: fitted curve misses a point",
                                        static_cast<int>(i));
        }
    }
    return cert;
}

std::string CoveringCertificate::to_json() const {
    nlohmann::json j;
    j["params"] = {{"delta", params.delta},
                   {"d", params.d},
                   {"T", params.T.str(20)},
                   {"L", params.L.str(20)}};
    j["parts"] = nlohmann::json::array();
    for (size_t i = 0; i < parts.size(); ++i) {
        nlohmann::json part;
        part["lo"] = rational_str(parts[i].first);
        part["hi"] = rational_str(parts[i].second);
        nlohmann::json curve;
        for (const auto& [mon, c] : curves[i].coeffs) {
            curve[std::to_string(mon.first) + "," + std::to_string(mon.second)] =
                rational_str(c);
        }
        part["curve"] = curve;
        j["parts"].push_back(part);
    }
    j["points"] = nlohmann::json::array();
    for (const auto& [x, y] : points)
        j["points"].push_back({rational_str(x), rational_str(y)});
    return j.dump(2);
}

std::vector<std::pair<mpq_class, mpq_class>> enumerate_rational_graph_points(
    const SmoothFunctionOracle& oracle, const mpq_class& lo, const mpq_class& hi,
    const mpz_class& T, mpfr_prec_t prec) {
    if (T < 1) throw domain_error("enumerate_rational_graph_points: T >= 1 required");
    // precision contract: at least 4 log2 T + 64 bits
    mpfr_prec_t need = static_cast<mpfr_prec_t>(
        4 * (mpz_sizeinbase(T.get_mpz_t(), 2) + 1) + 64);
    mpfr_prec_t wp = std::max(prec, need);

    std::vector<std::pair<mpq_class, mpq_class>> out;
    mpq_class tq(T);
    for (mpz_class b = 1; b <= T; ++b) {
        // a/b in [lo, hi], gcd(a,b) = 1, |a/b| <= T
        mpq_class alo_q = lo * mpq_class(b);
        mpq_class ahi_q = hi * mpq_class(b);
        mpz_class a_lo, a_hi;
        mpz_cdiv_q(a_lo.get_mpz_t(), alo_q.get_num().get_mpz_t(), alo_q.get_den().get_mpz_t());
        mpz_fdiv_q(a_hi.get_mpz_t(), ahi_q.get_num().get_mpz_t(), ahi_q.get_den().get_mpz_t());
        for (mpz_class a = a_lo; a <= a_hi; ++a) {
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            if (g != 1) continue;
            mpq_class x(a, b);
            x.canonicalize();
            if (size_height_rational(x) > tq) continue;
            std::optional<mpq_class> y;
            mpfr_prec_t attempt = wp;
            for (int tries = 0; tries < 3; ++tries, attempt *= 2) {
                try {
                    Real fx = oracle.value(Real::from_mpq(x, attempt), attempt);
                    y = rational_reconstruct(fx, T);
                    break;
                } catch (const ambiguity_error&) {
                    if (tries == 2)
                        throw precision_error(
                            "enumerate_rational_graph_points: ambiguous ordinate at x = " +
                            rational_str(x));
                }
            }
            if (!y) continue;
            if (size_height_rational(*y) > tq) continue;
            // re-verify at doubled precision
            Real fx2 = oracle.value(Real::from_mpq(x, 2 * attempt), 2 * attempt);
            if (!fx2.contains(*y)) continue;
            out.emplace_back(x, *y);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace lab
