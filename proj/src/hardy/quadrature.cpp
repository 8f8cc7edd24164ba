#include "hardy/quadrature.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>

namespace hardy {

namespace {

double powi(double base, unsigned e) {
    double r = 1.0;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

bool near_int(double x, long& out) {
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-12 && std::abs(r) <= 64.0) {
        out = static_cast<long>(r);
        return true;
    }
    return false;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

bool is_prime(std::uint64_t v) {
    if (v < 4) return v > 1;
    if (v % 2 == 0 || v % 3 == 0) return false;
    for (std::uint64_t f = 5; f * f <= v; f += 6)
        if (v % f == 0 || v % (f + 2) == 0) return false;
    return true;
}

std::uint64_t next_prime(std::uint64_t v) {
    while (!is_prime(v)) ++v;
    return v;
}

/// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre_01(std::size_t m, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(m);
    weights.resize(m);
    for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(m) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= m; ++k) {
                const double pk =
                    ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x); // descending x -> ascending node
        weights[i] = 0.5 * w;
        nodes[m - 1 - i] = 0.5 * (1.0 + x);
        weights[m - 1 - i] = 0.5 * w;
    }
}

struct RulePlan {
    bool lattice = false;
    std::size_t one_axis = 0; // product rules: nodes per axis
    std::size_t count = 0;
};

double product_count(std::size_t n, int level) {
    const double m = 16.0 * std::pow(2.0, level);
    return std::pow(m, static_cast<double>(2 * n - 1));
}

RulePlan plan_rule(std::size_t n, int level, const RuleOptions& opts) {
    RulePlan plan;
    if (n == 1) {
        plan.count = static_cast<std::size_t>(64) << level;
        plan.one_axis = plan.count;
        return plan;
    }
    const double pc = product_count(n, level);
    if (pc <= static_cast<double>(opts.node_cap)) {
        plan.one_axis = static_cast<std::size_t>(16) << level;
        plan.count = static_cast<std::size_t>(pc + 0.5);
        return plan;
    }
    if (!opts.allow_qmc)
        throw capacity_error(
            "build_rule: product rule for n=" + std::to_string(n) + ", level=" +
            std::to_string(level) + " needs " + std::to_string(pc) +
            " nodes (cap " + std::to_string(opts.node_cap) +
            "); set RuleOptions::allow_qmc for the low-discrepancy fallback");
    int l0 = 0;
    for (int l = level - 1; l >= 1; --l) {
        if (product_count(n, l) <= static_cast<double>(opts.node_cap)) {
            l0 = l;
            break;
        }
    }
    const double base = l0 >= 1 ? product_count(n, l0) : 1.5e6;
    const double target = base * std::pow(2.0, level - std::max(l0, 1) + (l0 >= 1 ? 0 : 1));
    if (target > 6e7)
        throw capacity_error("build_rule: lattice fallback for n=" + std::to_string(n) +
                             ", level=" + std::to_string(level) +
                             " would need " + std::to_string(target) + " nodes");
    plan.lattice = true;
    plan.count = 2 * next_prime(static_cast<std::uint64_t>(target / 2.0));
    return plan;
}

/// Korobov generating vector for a rank-1 lattice with N points in dimension d:
/// z = (1, a, a^2, ...) mod N, with a searched so that no low-order dual-lattice
/// point exists (low-degree trigonometric polynomials then integrate exactly).
std::vector<std::uint64_t> korobov_vector(std::uint64_t N, std::size_t d) {
    const int kmax = d <= 3 ? 8 : 4;
    const int candidates = d <= 3 ? 256 : 48;
    std::vector<long> k(d, -kmax);
    std::vector<std::uint64_t> best_z;
    double best_score = 1e300;
    for (int c = 0; c < candidates; ++c) {
        const std::uint64_t a =
            2 + splitmix64(static_cast<std::uint64_t>(c) * 0x9e3779b9u + N) % (N - 3);
        std::vector<std::uint64_t> z(d);
        z[0] = 1;
        for (std::size_t j = 1; j < d; ++j) z[j] = (z[j - 1] * a) % N;
        double score = 0.0;
        std::fill(k.begin(), k.end(), -kmax);
        for (;;) {
            bool zero = true;
            for (long kj : k) zero = zero && kj == 0;
            if (!zero) {
                std::int64_t dot = 0;
                for (std::size_t j = 0; j < d; ++j)
                    dot += k[j] * static_cast<std::int64_t>(z[j] % N);
                if (((dot % static_cast<std::int64_t>(N)) + static_cast<std::int64_t>(N)) %
                        static_cast<std::int64_t>(N) ==
                    0) {
                    double pen = 1.0;
                    for (long kj : k) pen /= std::max<double>(1.0, static_cast<double>(kj * kj));
                    score += pen;
                }
            }
            std::size_t j = 0;
            while (j < d && ++k[j] > kmax) k[j++] = -kmax;
            if (j == d) break;
        }
        if (score < best_score) {
            best_score = score;
            best_z = z;
            if (score == 0.0) break;
        }
    }
    return best_z;
}

} // namespace

double abs_pow(double magnitude, double p) {
    long ip = 0;
    if (near_int(p, ip) && ip >= 0) return powi(magnitude, static_cast<unsigned>(ip));
    long hp = 0;
    if (near_int(2.0 * p, hp) && hp >= 0)
        return powi(std::sqrt(magnitude), static_cast<unsigned>(hp));
    return std::pow(magnitude, p);
}

double abs_pow(const cplx& v, double p) {
    const double n2 = std::norm(v);
    long h = 0;
    if (near_int(0.5 * p, h) && h >= 0) return powi(n2, static_cast<unsigned>(h));
    long q = 0;
    if (near_int(2.0 * p, q) && q >= 0)
        return powi(std::sqrt(std::sqrt(n2)), static_cast<unsigned>(q));
    return std::pow(n2, 0.5 * p);
}

namespace detail {
void throw_nonfinite(std::size_t node_index) {
    throw evaluation_error("non-finite boundary-function value at quadrature node " +
                               std::to_string(node_index),
                           node_index);
}
} // namespace detail

CVec moebius_map(const Point& a, std::span<const cplx> w) {
    const double a2 = a.abs2();
    if (a2 < 1e-300) {
        CVec out(w.begin(), w.end());
        for (cplx& c : out) c = -c;
        return out;
    }
    // <w,a> with conjugation on a.
    const cplx t = hermitian_inner(std::span<const cplx>(a.coords()), w);
    const double s = std::sqrt(a.one_minus_abs2());
    const cplx proj = t / a2;
    const cplx denom = cplx(1.0, 0.0) - t;
    CVec out(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        const cplx pj = proj * a.coords()[j];
        const cplx qj = w[j] - pj;
        out[j] = (a.coords()[j] - pj - s * qj) / denom;
    }
    return out;
}

void QuadratureRule::renormalize() {
    const double total = block_sum(
        weights_.size(), [&](std::size_t i) { return weights_[i]; }, Exec::serial);
    const double inv = 1.0 / total;
    for (double& w : weights_) w *= inv;
}

QuadratureRule QuadratureRule::build_circle(int level) {
    QuadratureRule rule;
    rule.n_ = 1;
    rule.level_ = level;
    rule.tol_hint_ = 1e-12;
    const std::size_t count = static_cast<std::size_t>(64) << level;
    rule.coords_.resize(count);
    rule.weights_.assign(count, 1.0 / static_cast<double>(count));
    // Half-offset grid: same trigonometric exactness, and no node sits on the
    // real axis where the radial test families put their poles.
    for (std::size_t j = 0; j < count; ++j) {
        const double th = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) /
                          static_cast<double>(count);
        rule.coords_[j] = cplx(std::cos(th), std::sin(th));
    }
    return rule;
}

QuadratureRule QuadratureRule::build_product(std::size_t n, int level, std::size_t m) {
    QuadratureRule rule;
    rule.n_ = n;
    rule.level_ = level;
    rule.tol_hint_ = 1e-8;
    std::vector<double> gl_nodes, gl_weights;
    gauss_legendre_01(m, gl_nodes, gl_weights);

    const std::size_t radial_dims = n - 1;
    std::size_t radial_count = 1;
    for (std::size_t j = 0; j < radial_dims; ++j) radial_count *= m;
    std::size_t angle_count = 1;
    for (std::size_t j = 0; j < n; ++j) angle_count *= m;
    const std::size_t count = radial_count * angle_count;
    rule.coords_.resize(count * n);
    rule.weights_.resize(count);

    double factorial = 1.0;
    for (std::size_t j = 2; j <= radial_dims; ++j) factorial *= static_cast<double>(j);

    std::vector<double> cos_t(m), sin_t(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double th = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) /
                          static_cast<double>(m);
        cos_t[j] = std::cos(th);
        sin_t[j] = std::sin(th);
    }
    const double angle_w = 1.0 / static_cast<double>(angle_count);

    par_for(radial_count, [&](std::size_t ridx) {
        // Decode the simplex multi-index, then Duffy-map to barycentric u.
        std::vector<std::size_t> ids(radial_dims);
        std::size_t rest = ridx;
        for (std::size_t j = 0; j < radial_dims; ++j) {
            ids[j] = rest % m;
            rest /= m;
        }
        std::vector<double> u(n);
        double rem = 1.0, wrad = factorial, jac = 1.0;
        for (std::size_t j = 0; j < radial_dims; ++j) {
            const double y = gl_nodes[ids[j]];
            u[j] = y * rem;
            jac *= rem;
            rem *= (1.0 - y);
            wrad *= gl_weights[ids[j]];
        }
        u[n - 1] = rem;
        wrad *= jac;
        std::vector<double> root(n);
        for (std::size_t j = 0; j < n; ++j) root[j] = std::sqrt(std::max(0.0, u[j]));

        std::vector<std::size_t> aid(n, 0);
        for (std::size_t aix = 0; aix < angle_count; ++aix) {
            const std::size_t node = ridx * angle_count + aix;
            std::size_t arest = aix;
            double norm2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                aid[j] = arest % m;
                arest /= m;
                const cplx z(root[j] * cos_t[aid[j]], root[j] * sin_t[aid[j]]);
                rule.coords_[node * n + j] = z;
                norm2 += std::norm(z);
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t j = 0; j < n; ++j) rule.coords_[node * n + j] *= inv;
            rule.weights_[node] = wrad * angle_w;
        }
    });
    rule.renormalize();
    return rule;
}

QuadratureRule QuadratureRule::build_lattice(std::size_t n, int level, std::size_t count) {
    QuadratureRule rule;
    rule.n_ = n;
    rule.level_ = level;
    rule.qmc_ = true;
    rule.tol_hint_ = 1e-5;
    const std::uint64_t N = count / 2;
    const std::size_t d = 2 * n - 1;
    const auto z = korobov_vector(N, d);
    std::vector<double> shift(d);
    for (std::size_t j = 0; j < d; ++j)
        shift[j] = static_cast<double>(splitmix64(1000 * n + 10 * j + level)) * 0x1p-64;

    rule.coords_.resize(count * n);
    rule.weights_.resize(count);
    const std::size_t radial_dims = n - 1;
    double factorial = 1.0;
    for (std::size_t j = 2; j <= radial_dims; ++j) factorial *= static_cast<double>(j);
    const double base_w = factorial / static_cast<double>(count);

    par_for(N, [&](std::size_t j) {
        std::vector<double> x(d);
        for (std::size_t t = 0; t < d; ++t) {
            const double frac = static_cast<double>((j * z[t]) % N) / static_cast<double>(N);
            x[t] = frac + shift[t];
            x[t] -= std::floor(x[t]);
        }
        // Tent transform on the simplex variables periodizes the non-periodic
        // directions; the angles are periodic already.
        std::vector<double> u(n);
        double rem = 1.0, jac = 1.0;
        for (std::size_t t = 0; t < radial_dims; ++t) {
            const double y = 1.0 - std::abs(2.0 * x[t] - 1.0);
            u[t] = y * rem;
            jac *= rem;
            rem *= (1.0 - y);
        }
        u[n - 1] = rem;
        const double w = base_w * jac;
        // Antithetic partner: all angles shifted by half a period, so odd
        // monomials cancel pairwise and adjacent in the summation order.
        for (int half = 0; half < 2; ++half) {
            const std::size_t node = 2 * j + half;
            double norm2 = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                double ang = x[radial_dims + t] + (half ? 0.5 : 0.0);
                ang -= std::floor(ang);
                const double th = 2.0 * std::numbers::pi * ang;
                const double r = std::sqrt(std::max(0.0, u[t]));
                const cplx zc(r * std::cos(th), r * std::sin(th));
                rule.coords_[node * n + t] = zc;
                norm2 += std::norm(zc);
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t t = 0; t < n; ++t) rule.coords_[node * n + t] *= inv;
            rule.weights_[node] = w;
        }
    });
    rule.renormalize();
    return rule;
}

QuadratureRule QuadratureRule::build(std::size_t n, int level, const RuleOptions& opts) {
    if (n < 1) throw std::invalid_argument("build_rule: dimension must be >= 1");
    if (level < 1) throw std::invalid_argument("build_rule: level must be >= 1");
    const RulePlan plan = plan_rule(n, level, opts);
    if (n == 1) return build_circle(level);
    if (plan.lattice) return build_lattice(n, level, plan.count);
    return build_product(n, level, plan.one_axis);
}

QuadratureRule QuadratureRule::pulled_toward(const Point& center) const {
    if (center.dim() != n_) throw dimension_mismatch(center.dim(), n_);
    if (center.abs2() < 1e-28) return *this;
    QuadratureRule out;
    out.n_ = n_;
    out.level_ = level_;
    out.qmc_ = qmc_;
    out.adapted_ = true;
    out.tol_hint_ = std::max(tol_hint_, 1e-10);
    out.coords_.resize(coords_.size());
    out.weights_.resize(weights_.size());
    const double om = center.one_minus_abs2();
    par_for(size(), [&](std::size_t i) {
        const auto w = node(i);
        const cplx t = hermitian_inner(std::span<const cplx>(center.coords()), w);
        const double jac = powi(om / std::norm(cplx(1.0, 0.0) - t), static_cast<unsigned>(n_));
        const CVec mapped = moebius_map(center, w);
        double norm2 = 0.0;
        for (std::size_t j = 0; j < n_; ++j) norm2 += std::norm(mapped[j]);
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t j = 0; j < n_; ++j) out.coords_[i * n_ + j] = mapped[j] * inv;
        out.weights_[i] = weights_[i] * jac;
    });
    return out;
}

QuadratureRule QuadratureRule::with_peaks(std::span<const Point> hints) const {
    // A dyadic ladder of pullback centers per peak direction: scales
    // 1/2, 1/4, ... down to the peak's boundary gap. Every partition seam then
    // falls inside some rung's resolved band; a single deep pullback per peak
    // leaves unresolvable seams at the intermediate scales.
    std::vector<Point> reps;
    for (const Point& h : hints) {
        if (h.dim() != n_) throw dimension_mismatch(h.dim(), n_);
        if (h.abs() < 0.1) continue;
        const double gap = 1.0 - h.abs();
        const int deepest = static_cast<int>(std::ceil(std::log2(1.0 / gap)));
        CVec dir = h.coords();
        for (cplx& c : dir) c /= h.abs();
        for (int l = 1; l <= deepest; ++l) {
            const double scale = std::exp2(-l);
            if (scale < 2e-12) break; // rung center would leave the numeric ball
            bool merged = false;
            for (const Point& r : reps) {
                if (std::abs((1.0 - r.abs()) - scale) > 0.25 * scale) continue;
                CVec dir_r = r.coords();
                for (cplx& c : dir_r) c /= r.abs();
                if (pseudo_distance(std::span<const cplx>(dir),
                                    std::span<const cplx>(dir_r)) <= 0.25 * scale) {
                    merged = true;
                    break;
                }
            }
            if (merged) continue;
            CVec rung = dir;
            for (cplx& c : rung) c *= (1.0 - scale);
            reps.emplace_back(std::move(rung));
        }
    }
    const std::size_t copy_cap = std::max<std::size_t>(8, 60'000'000 / std::max<std::size_t>(1, size()));
    if (reps.size() > copy_cap)
        throw capacity_error("with_peaks: " + std::to_string(reps.size()) +
                             " pullback copies of a " + std::to_string(size()) +
                             "-node rule exceed the node budget; thin the hint set");
    if (reps.empty()) return *this;

    const std::size_t K = reps.size();
    const std::size_t base_count = size();
    QuadratureRule out;
    out.n_ = n_;
    out.level_ = level_;
    out.qmc_ = qmc_;
    out.adapted_ = true;
    out.tol_hint_ = std::max(tol_hint_, 1e-9) * 10.0;
    out.coords_.resize((K + 1) * base_count * n_);
    out.weights_.resize((K + 1) * base_count);

    std::vector<double> oms(K);
    for (std::size_t k = 0; k < K; ++k) oms[k] = reps[k].one_minus_abs2();
    const auto balance = [&](std::span<const cplx> zeta, std::size_t j) {
        // Power-heuristic balance: squared node densities suppress the copies
        // that under-resolve a region faster than the densities themselves.
        double pj = 1.0, total = 1.0;
        for (std::size_t k = 0; k < K; ++k) {
            const cplx t = hermitian_inner(std::span<const cplx>(reps[k].coords()), zeta);
            double pk = powi(oms[k] / std::norm(cplx(1.0, 0.0) - t),
                             static_cast<unsigned>(n_));
            pk *= pk;
            total += pk;
            if (j == k + 1) pj = pk;
        }
        return pj / total;
    };

    // Copy 0 is the unadapted base rule.
    for (std::size_t j = 0; j <= K; ++j) {
        const QuadratureRule sub = j == 0 ? *this : pulled_toward(reps[j - 1]);
        par_for(base_count, [&](std::size_t i) {
            const std::size_t node_ix = j * base_count + i;
            for (std::size_t t = 0; t < n_; ++t)
                out.coords_[node_ix * n_ + t] = sub.coords_[i * n_ + t];
            out.weights_[node_ix] = sub.weights_[i] * balance(sub.node(i), j);
        });
    }
    // Unlike a single pullback, the balanced combination approximates sigma
    // itself, so total mass 1 is restorable.
    out.renormalize();
    return out;
}

void QuadratureRule::save(std::ostream& out) const {
    const std::uint64_t header[3] = {static_cast<std::uint64_t>(n_),
                                     static_cast<std::uint64_t>(level_),
                                     static_cast<std::uint64_t>(size())};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    std::vector<double> record(2 * n_ + 1);
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            record[2 * j] = coords_[i * n_ + j].real();
            record[2 * j + 1] = coords_[i * n_ + j].imag();
        }
        record[2 * n_] = weights_[i];
        out.write(reinterpret_cast<const char*>(record.data()),
                  static_cast<std::streamsize>(sizeof(double) * record.size()));
    }
}

QuadratureRule QuadratureRule::load(std::istream& in) {
    std::uint64_t header[3] = {0, 0, 0};
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || header[0] < 1 || header[0] > 64 || header[2] > 1'000'000'000ull)
        throw std::runtime_error("quadrature cache: bad header");
    QuadratureRule rule;
    rule.n_ = static_cast<std::size_t>(header[0]);
    rule.level_ = static_cast<int>(header[1]);
    const std::size_t count = static_cast<std::size_t>(header[2]);
    rule.coords_.resize(count * rule.n_);
    rule.weights_.resize(count);
    std::vector<double> record(2 * rule.n_ + 1);
    for (std::size_t i = 0; i < count; ++i) {
        in.read(reinterpret_cast<char*>(record.data()),
                static_cast<std::streamsize>(sizeof(double) * record.size()));
        if (!in) throw std::runtime_error("quadrature cache: truncated file");
        for (std::size_t j = 0; j < rule.n_; ++j)
            rule.coords_[i * rule.n_ + j] = cplx(record[2 * j], record[2 * j + 1]);
        rule.weights_[i] = record[2 * rule.n_];
    }
    rule.tol_hint_ = rule.n_ == 1 ? 1e-12 : 1e-8;
    return rule;
}

QuadratureRule cached_rule(std::size_t n, int level, const RuleOptions& opts) {
    if (opts.cache_dir.empty()) return QuadratureRule::build(n, level, opts);
    namespace fs = std::filesystem;
    const fs::path path = fs::path(opts.cache_dir) /
                          ("rule_n" + std::to_string(n) + "_L" + std::to_string(level) + ".bin");
    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        try {
            QuadratureRule rule = QuadratureRule::load(in);
            if (rule.dim() == n && rule.level() == level) return rule;
        } catch (const std::exception&) {
            // fall through and rebuild
        }
    }
    QuadratureRule rule = QuadratureRule::build(n, level, opts);
    std::error_code ec;
    fs::create_directories(fs::path(opts.cache_dir), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (out) rule.save(out);
    }
    fs::rename(tmp, path, ec);
    return rule;
}

} // namespace hardy
