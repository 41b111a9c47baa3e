#include "hofbauer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hofbauer {
namespace {

cplx ipow(cplx z, unsigned k) {
    cplx r = 1.0;
    for (unsigned i = 0; i < k; ++i) r *= z;
    return r;
}

} // namespace

PolynomialModel::PolynomialModel(unsigned degree, cplx c, double tol_orbit) : d_(degree), c_(c) {
    if (degree < 2) throw std::invalid_argument("degree must be at least 2");
    orbit_.push_back(0.0);
    for (int n = 1; n <= 64; ++n) {
        const cplx z = f(orbit_.back());
        if (std::abs(z) > 1e6) break;
        if (std::abs(z) < tol_orbit) throw std::invalid_argument("critical point is periodic");
        for (int p = 1; p < n; ++p) {
            if (std::abs(z - orbit_[static_cast<std::size_t>(p)]) < tol_orbit) {
                P_ = p;
                Q_ = n - p;
                orbit_.push_back(z);
                return;
            }
        }
        orbit_.push_back(z);
    }
    throw std::invalid_argument("critical orbit of c is not numerically strictly preperiodic");
}

cplx PolynomialModel::f(cplx z) const { return ipow(z, d_) + c_; }

std::vector<cplx> PolynomialModel::postcritical() const {
    return {orbit_.begin() + 1, orbit_.end() - 1};
}

double log_deriv(const PolynomialModel& m, cplx z) {
    if (z == cplx(0.0)) throw std::domain_error("log|Df| is singular at the critical point");
    return std::log(static_cast<double>(m.degree())) +
           static_cast<double>(m.degree() - 1) * std::log(std::abs(z));
}

double green(const PolynomialModel& m, cplx z, int n) {
    double scale = 1.0;
    for (int k = 0; k < n; ++k) {
        const double r = std::abs(z);
        if (r > 1e8) return std::log(r) * scale;
        z = m.f(z);
        scale /= static_cast<double>(m.degree());
    }
    return std::max(0.0, std::log(std::abs(z))) * scale;
}

LandingSolver::LandingSolver(const PolynomialModel& m, LandingParams p) : m_(&m), p_(p) {
    const unsigned d = m.degree();
    grid_ = 1;
    for (int i = 0; i < p_.grid_level; ++i) grid_ *= d;
    const std::size_t N = grid_;
    const cplx c = m.c();
    constexpr int S = 16;      // potential sub-levels per application of f
    constexpr int levels = 32; // applications of f
    const double top = std::log(1e6);
    const double two_pi = 2.0 * std::numbers::pi;

    // ring[s % S][j]: point of ray j/N at potential top / d^(s/S)
    std::vector<std::vector<cplx>> ring(S, std::vector<cplx>(N));
    for (int s = 0; s < S; ++s) {
        const double t = top / std::pow(static_cast<double>(d), static_cast<double>(s) / S);
        for (std::size_t j = 0; j < N; ++j) {
            const cplx w = std::polar(std::exp(t), two_pi * static_cast<double>(j) / static_cast<double>(N));
            ring[static_cast<std::size_t>(s)][j] = w - c / (static_cast<double>(d) * ipow(w, d - 1));
        }
    }
    std::vector<cplx> next(N);
    for (int s = S; s < S * levels; ++s) {
        const auto& up = ring[static_cast<std::size_t>(s % S)];           // level s - S
        const auto& prev = ring[static_cast<std::size_t>((s - 1) % S)];   // level s - 1
        for (std::size_t j = 0; j < N; ++j) next[j] = pullback(up[(j * d) % N], prev[j]);
        ring[static_cast<std::size_t>(s % S)].swap(next);
    }
    const auto& deep = ring[static_cast<std::size_t>((S * levels - 1) % S)];

    table_.assign(N, 0.0);
    cplx beta = deep[0];
    for (int i = 0; i < 400; ++i) beta = pullback(beta, beta);
    table_[0] = beta;
    // Angles with denominator d^k, k = 1..L, each from its image of denominator d^(k-1).
    std::size_t stride = N;
    for (int k = 1; k <= p_.grid_level; ++k) {
        stride /= d;
        for (std::size_t j = stride; j < N; j += stride) {
            if ((j / stride) % d == 0) continue;
            table_[j] = pullback(table_[(j * d) % N], deep[j]);
        }
    }
}

cplx LandingSolver::pullback(cplx w, cplx hint) const {
    const unsigned d = m_->degree();
    const cplx r = d == 2 ? std::sqrt(w - m_->c()) : std::pow(w - m_->c(), 1.0 / d);
    if (d == 2) return std::norm(r - hint) <= std::norm(r + hint) ? r : -r;
    cplx best = r;
    double bd = std::norm(r - hint);
    const cplx rot = std::polar(1.0, 2.0 * std::numbers::pi / d);
    cplx cand = r;
    for (unsigned k = 1; k < d; ++k) {
        cand *= rot;
        const double dd = std::norm(cand - hint);
        if (dd < bd) {
            bd = dd;
            best = cand;
        }
    }
    return best;
}

cplx LandingSolver::approx_land(double theta) const {
    const double x = theta * static_cast<double>(grid_);
    double fl = std::floor(x);
    const double t = x - fl;
    auto j = static_cast<long long>(fl) % static_cast<long long>(grid_);
    if (j < 0) j += static_cast<long long>(grid_);
    const auto ju = static_cast<std::size_t>(j);
    return (1.0 - t) * table_[ju] + t * table_[(ju + 1) % grid_];
}

cplx LandingSolver::land(const Angle& a) const {
    const std::size_t K = static_cast<std::size_t>(p_.depth);
    std::vector<double> th(K + 1);
    AngleCursor cur(a, m_->degree());
    for (std::size_t k = 0; k <= K; ++k) {
        th[k] = cur.approx();
        cur.advance();
    }
    auto sweep = [&](std::size_t depth) {
        cplx z = approx_land(th[depth]);
        for (std::size_t k = depth; k-- > 0;) z = pullback(z, approx_land(th[k]));
        return z;
    };
    const cplx z = sweep(K);
    const std::size_t gap = std::min<std::size_t>(static_cast<std::size_t>(p_.cauchy_gap), K);
    const cplx z2 = sweep(K - gap);
    if (std::abs(z - z2) > p_.tol)
        throw LandingError("landing of " + a.to_string() + " not converged: Cauchy gap " +
                           std::to_string(std::abs(z - z2)));
    return z;
}

std::vector<cplx> LandingSolver::orbit(const Angle& a, std::size_t n) const {
    const std::size_t total = n + static_cast<std::size_t>(p_.depth);
    std::vector<double> th(total);
    AngleCursor cur(a, m_->degree());
    for (std::size_t k = 0; k < total; ++k) {
        th[k] = cur.approx();
        cur.advance();
    }
    std::vector<cplx> out(n);
    cplx z = approx_land(th[total - 1]);
    for (std::size_t k = total - 1; k-- > 0;) {
        z = pullback(z, approx_land(th[k]));
        if (k < n) out[k] = z;
    }
    return out;
}

double birkhoff_lyapunov(const LandingSolver& s, const Angle& a, std::size_t n) {
    if (n == 0) throw std::invalid_argument("Birkhoff average over zero steps");
    const auto pts = s.orbit(a, n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(pts[k]) < 1e-12)
            throw std::domain_error("orbit of " + a.to_string() + " hits the critical point at step " +
                                    std::to_string(k));
        sum += log_deriv(s.model(), pts[k]);
    }
    return sum / static_cast<double>(n);
}

double koebe_constant(double M) {
    if (!(M > 0)) throw std::invalid_argument("modulus must be positive");
    const double r = std::exp(-2.0 * std::numbers::pi * M);
    return std::pow((1.0 + r) / (1.0 - r), 4);
}

DistortionSample sample_distortion(const LandingSolver& s, const Angle& a, std::size_t n,
                                   double M, int probes) {
    DistortionSample out;
    out.time = static_cast<int>(n);
    out.bound = koebe_constant(M);
    if (n == 0) return out;
    const PolynomialModel& m = s.model();
    const auto orb = s.orbit(a, n + 1);
    const cplx w = orb[n];
    double r_out = 1e300;
    for (const cplx& p : m.postcritical()) r_out = std::min(r_out, std::abs(w - p));
    const double r_in = r_out * std::exp(-2.0 * std::numbers::pi * M);

    // log|D f^n| at the pullback of u, continuing the branch along w -> u.
    auto log_df = [&](cplx u) {
        std::vector<cplx> chain(orb.begin(), orb.begin() + static_cast<std::ptrdiff_t>(n));
        constexpr int substeps = 8;
        for (int t = 1; t <= substeps; ++t) {
            cplx v = w + (u - w) * (static_cast<double>(t) / substeps);
            for (std::size_t k = n; k-- > 0;) {
                v = s.pullback(v, chain[k]);
                chain[k] = v;
            }
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += log_deriv(m, chain[k]);
        return acc;
    };
    double lo = log_df(w), hi = lo;
    for (int i = 0; i < probes; ++i) {
        const cplx u = w + std::polar(r_in, 2.0 * std::numbers::pi * i / probes);
        const double v = log_df(u);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    out.ratio = std::exp(hi - lo);
    return out;
}

std::vector<std::size_t> large_scale_events(const Angle& a, const TowerGraph& g,
                                            const WitnessRegion& w, std::size_t n) {
    std::vector<std::size_t> out;
    if (n == 0) return out;
    Tracer tr(g);
    AngleCursor cur(a, g.partition().degree());
    int node = 0;
    for (std::size_t j = 0; j <= n; ++j) {
        if (node == w.domain && w.arcs.contains(cur)) out.push_back(j);
        if (j == n) break;
        node = tr.next(node, g.partition().symbol(cur));
        cur.advance();
    }
    return out;
}

} // namespace hofbauer
