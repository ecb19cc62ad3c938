#include "intermap/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "intermap/empirical.hpp"
#include "intermap/parallel.hpp"
#include "intermap/rng.hpp"

namespace intermap {

namespace {

std::size_t locate_bin(const std::vector<double>& edges, double x) {
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    if (it == edges.begin()) return 0;
    auto i = static_cast<std::size_t>(it - edges.begin()) - 1;
    if (i >= edges.size() - 1) i = edges.size() - 2;
    return i;
}

void require_interval_density_params(const MapSpec& spec) {
    if (spec.kind != MapKind::Interval)
        throw std::invalid_argument(
            "density: interval map required (the circle map has constant density)");
    const auto& p = spec.interval_params();
    if (!(p.kappa * (p.gamma - 1.0) < 1.0))
        throw std::invalid_argument(
            "density: no absolutely continuous invariant measure, need kappa*(gamma-1) < 1");
}

// Uniform grid plus geometric refinement toward -1, 0 and +1.
std::vector<double> make_edges(int bins) {
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(bins) + 256);
    for (int i = 0; i <= bins; ++i)
        e.push_back(-1.0 + 2.0 * static_cast<double>(i) / bins);
    for (int k = 0; k <= 48; ++k) {
        double d = 0.1 * std::pow(10.0, -static_cast<double>(k) / 8.0);
        e.push_back(-1.0 + d);
        e.push_back(-d);
        e.push_back(d);
        e.push_back(1.0 - d);
    }
    std::sort(e.begin(), e.end());
    std::vector<double> out;
    out.push_back(-1.0);
    for (double v : e)
        if (v > out.back() + 1e-12 && v < 1.0) out.push_back(v);
    out.push_back(1.0);
    return out;
}

} // namespace

double DensityEstimate::mass_on(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    lo = std::max(lo, edges.front());
    hi = std::min(hi, edges.back());
    if (hi <= lo) return 0.0;
    std::size_t i0 = locate_bin(edges, lo), i1 = locate_bin(edges, hi);
    auto frac = [&](std::size_t i, double a, double b) {
        double w = edges[i + 1] - edges[i];
        return (w > 0) ? mass[i] * (b - a) / w : 0.0;
    };
    if (i0 == i1) return frac(i0, lo, hi);
    double m = frac(i0, lo, edges[i0 + 1]) + frac(i1, edges[i1], hi);
    for (std::size_t i = i0 + 1; i < i1; ++i) m += mass[i];
    return m;
}

double DensityEstimate::density_at(double x) const {
    std::size_t i = locate_bin(edges, x);
    double w = edges[i + 1] - edges[i];
    return (w > 0) ? mass[i] / w : 0.0;
}

double l1_distance(const DensityEstimate& d, const std::function<double(double)>& density) {
    double l1 = 0;
    for (std::size_t i = 0; i < d.bins(); ++i) {
        double w = d.edges[i + 1] - d.edges[i];
        if (w <= 0) continue;
        double est = d.mass[i] / w;
        // reference sampled at 4 interior points per bin
        for (int q = 0; q < 4; ++q) {
            double x = d.edges[i] + w * (2.0 * q + 1.0) / 8.0;
            l1 += 0.25 * w * std::abs(est - density(x));
        }
    }
    return l1;
}

double l1_distance(const DensityEstimate& a, const DensityEstimate& b) {
    std::vector<double> merged;
    merged.reserve(a.edges.size() + b.edges.size());
    std::merge(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    double l1 = 0;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        double w = merged[i + 1] - merged[i];
        if (w <= 0) continue;
        double x = 0.5 * (merged[i] + merged[i + 1]);
        l1 += w * std::abs(a.density_at(x) - b.density_at(x));
    }
    return l1;
}

DensityEstimate histogram_density(const MapSpec& spec, int bins, long samples, long burn_in,
                                  std::uint64_t seed, unsigned workers) {
    require_interval_density_params(spec);
    if (bins < 10 || samples < 1000 || burn_in < 0)
        throw std::invalid_argument("histogram_density: bad sizes");
    DensityEstimate d;
    d.method = DensityMethod::Histogram;
    d.edges = make_edges(bins);
    const std::size_t nb = d.edges.size() - 1;
    const int tasks = 100;
    const long per_task = (samples + tasks - 1) / tasks;
    auto parts = run_tasks<std::vector<long>>(
        static_cast<std::size_t>(tasks), workers, [&](std::size_t task) {
            auto rng = task_rng(seed, task);
            double x = uniform_open(rng, -1.0, 1.0);
            for (long k = 0; k < burn_in; ++k) x = orbit_step(spec, x);
            std::vector<long> counts(nb, 0);
            for (long k = 0; k < per_task; ++k) {
                ++counts[locate_bin(d.edges, x)];
                x = orbit_step(spec, x);
            }
            return counts;
        });
    std::vector<long> counts(nb, 0);
    for (const auto& p : parts)
        for (std::size_t i = 0; i < nb; ++i) counts[i] += p[i];
    d.sample_count = per_task * tasks;
    d.mass.resize(nb);
    for (std::size_t i = 0; i < nb; ++i)
        d.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(d.sample_count);
    return d;
}

namespace {

// Preimage of (y0, y1) under the stated branch, as an interval.
struct PreimageInterval {
    double lo, hi;
};

PreimageInterval branch_preimage(const MapSpec& spec, Branch br, double y0, double y1) {
    double p0 = invert_branch(spec, br, y0);
    double p1 = invert_branch(spec, br, y1);
    if (p0 > p1) std::swap(p0, p1);
    return {p0, p1};
}

// Solves v P = v with sum(v) = 1 by Gaussian elimination with partial
// pivoting on (P^T - I) with the last row replaced by the normalization.
std::vector<double> stationary_vector(std::vector<double>& P, std::size_t n) {
    std::vector<double> A(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            A[j * n + i] = P[i * n + j] - (i == j ? 1.0 : 0.0);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) A[(n - 1) * n + j] = 1.0;
    rhs[n - 1] = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i * n + k]) > std::abs(A[piv * n + k])) piv = i;
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
            std::swap(rhs[k], rhs[piv]);
        }
        double d = A[k * n + k];
        if (d == 0.0) throw std::runtime_error("ulam_density: singular fixed-point system");
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = A[i * n + k] / d;
            if (f == 0.0) continue;
            A[i * n + k] = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) A[i * n + j] -= f * A[k * n + j];
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<double> v(n);
    for (std::size_t ik = n; ik-- > 0;) {
        double s = rhs[ik];
        for (std::size_t j = ik + 1; j < n; ++j) s -= A[ik * n + j] * v[j];
        v[ik] = s / A[ik * n + ik];
    }
    return v;
}

} // namespace

DensityEstimate ulam_density(const MapSpec& spec, int cells) {
    require_interval_density_params(spec);
    if (cells < 100) throw std::invalid_argument("ulam_density: cells >= 100 required");
    const auto n = static_cast<std::size_t>(cells);
    DensityEstimate d;
    d.method = DensityMethod::Ulam;
    d.edges.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        d.edges[i] = -1.0 + 2.0 * static_cast<double>(i) / cells;
    const double w = 2.0 / cells;

    std::vector<double> P(n * n, 0.0); // row-stochastic, P[i][j] = m(cell_i -> cell_j)
    for (std::size_t j = 0; j < n; ++j) {
        for (Branch br : {Branch::Left, Branch::Right}) {
            PreimageInterval pre = branch_preimage(spec, br, d.edges[j], d.edges[j + 1]);
            std::size_t i0 = locate_bin(d.edges, pre.lo), i1 = locate_bin(d.edges, pre.hi);
            for (std::size_t i = i0; i <= i1; ++i) {
                double lo = std::max(pre.lo, d.edges[i]);
                double hi = std::min(pre.hi, d.edges[i + 1]);
                if (hi > lo) P[i * n + j] += (hi - lo) / w;
            }
        }
    }
    auto v = stationary_vector(P, n);
    double total = 0;
    for (double& x : v) {
        if (x < 0) x = 0; // direct-solve noise, O(1e-14)
        total += x;
    }
    for (double& x : v) x /= total;
    // fixed-point residual |vP - v|_1
    double res = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += v[i] * P[i * n + j];
        res += std::abs(s - v[j]);
    }
    if (res > 1e-10)
        throw std::runtime_error("ulam_density: stationary residual " + std::to_string(res) +
                                 " exceeds 1e-10");
    d.residual = res;
    d.mass = std::move(v);
    return d;
}

DensityEstimate apply_transfer(const MapSpec& spec, const DensityEstimate& d) {
    require_interval_density_params(spec);
    DensityEstimate out = d;
    std::fill(out.mass.begin(), out.mass.end(), 0.0);
    for (std::size_t j = 0; j < d.bins(); ++j) {
        for (Branch br : {Branch::Left, Branch::Right}) {
            PreimageInterval pre = branch_preimage(spec, br, d.edges[j], d.edges[j + 1]);
            std::size_t i0 = locate_bin(d.edges, pre.lo), i1 = locate_bin(d.edges, pre.hi);
            for (std::size_t i = i0; i <= i1; ++i) {
                double lo = std::max(pre.lo, d.edges[i]);
                double hi = std::min(pre.hi, d.edges[i + 1]);
                double wi = d.edges[i + 1] - d.edges[i];
                if (hi > lo && wi > 0) out.mass[j] += d.mass[i] * (hi - lo) / wi;
            }
        }
    }
    double total = 0;
    for (double m : out.mass) total += m;
    if (total > 0)
        for (double& m : out.mass) m /= total;
    return out;
}

CylinderExponents cylinder_measure_exponents(const MapSpec& spec, const DensityEstimate& d,
                                             const PartitionTable& table, long n_lo,
                                             long n_hi) {
    require_interval_density_params(spec);
    if (n_lo < 1 || n_hi <= n_lo || n_hi + 1 > table.N)
        throw std::invalid_argument("cylinder_measure_exponents: bad n range for table depth");
    const auto& p = spec.interval_params();
    const double e = 1.0 / (p.kappa * (p.gamma - 1.0));
    CylinderExponents r;
    r.n_lo = n_lo;
    r.n_hi = n_hi;
    r.pred_plus = -(1.0 - p.kappa + p.kappa * p.gamma) / (p.kappa * (p.gamma - 1.0));
    r.pred_minus = -e;
    r.pred_zero = -(e + 1.0);
    r.pred_density_slope_minus1 = (1.0 - p.kappa * p.gamma) / p.kappa;
    r.trichotomy = (p.kappa * p.gamma > 1.0) ? +1 : ((p.kappa * p.gamma == 1.0) ? 0 : -1);

    const double floor_mass =
        (d.method == DensityMethod::Histogram && d.sample_count > 0)
            ? 10.0 / static_cast<double>(d.sample_count)
            : 0.0;
    std::vector<double> np, mp, nm, mm, nz, mz, uu, rho;
    for (long n = n_lo; n <= n_hi; ++n) {
        auto i = static_cast<std::size_t>(n);
        double m_plus = d.mass_on(table.a[i - 1], table.a[i]);
        double m_minus = d.mass_on(-table.a[i], -table.a[i - 1]);
        double m_zero = d.mass_on(table.b[i + 1], table.b[i]);
        auto push = [&](std::vector<double>& xs, std::vector<double>& ys, double m) {
            if (m <= floor_mass) {
                r.starved = true;
                return;
            }
            xs.push_back(static_cast<double>(n));
            ys.push_back(m);
        };
        push(np, mp, m_plus);
        push(nm, mm, m_minus);
        push(nz, mz, m_zero);
        if (m_minus > floor_mass && table.l[i] > 0) {
            uu.push_back(table.one_minus_a[i]);
            rho.push_back(m_minus / table.l[i]);
        }
    }
    if (np.size() < 2 || nm.size() < 2 || nz.size() < 2 || uu.size() < 2)
        throw std::runtime_error("cylinder_measure_exponents: too few usable cylinders");
    r.exp_plus = fit_loglog_slope(np, mp);
    r.exp_minus = fit_loglog_slope(nm, mm);
    r.exp_zero = fit_loglog_slope(nz, mz);
    r.density_slope_minus1 = fit_loglog_slope(uu, rho);
    double b0 = table.b[static_cast<std::size_t>(n_lo)];
    r.density_near_zero = d.mass_on(-b0, b0) / (2.0 * b0);
    return r;
}

void export_density_csv(const DensityEstimate& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_density_csv: cannot open " + path);
    out << std::setprecision(17);
    out << "bin_lo,bin_hi,mass,density\n";
    for (std::size_t i = 0; i < d.bins(); ++i) {
        double w = d.edges[i + 1] - d.edges[i];
        out << d.edges[i] << "," << d.edges[i + 1] << "," << d.mass[i] << ","
            << (w > 0 ? d.mass[i] / w : 0.0) << "\n";
    }
}

} // namespace intermap
