#include "intermap/partition.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "intermap/quadrature.hpp"
#include "intermap/rng.hpp"

namespace intermap {

double PartitionTable::a_of(long n) const {
    long k = std::labs(n);
    if (k > N) throw std::out_of_range("PartitionTable::a_of: index beyond table depth");
    return (n < 0) ? -a[static_cast<std::size_t>(k)] : a[static_cast<std::size_t>(k)];
}

double PartitionTable::b_of(long n) const {
    long k = std::labs(n);
    if (k < 1 || k > N) throw std::out_of_range("PartitionTable::b_of: index out of range");
    return (n < 0) ? -b[static_cast<std::size_t>(k)] : b[static_cast<std::size_t>(k)];
}

PartitionTable build_partition(const MapSpec& spec, long N) {
    if (N < 1) throw std::invalid_argument("build_partition: N >= 1 required");
    PartitionTable t;
    t.spec = spec;
    t.N = N;
    auto sz = static_cast<std::size_t>(N) + 1;
    t.a.resize(sz);
    t.one_minus_a.resize(sz);
    t.b.resize(sz);
    t.l.resize(sz);

    // The a_n recursion is run on u_n = 1 - a_n; near the neutral point
    // the update u - const * u^g keeps ~16 digits where 1 - a would not.
    if (spec.kind == MapKind::Circle) {
        const double g = spec.circle_params().gamma;
        const double c = 1.0 / (2.0 * g);
        double u = 1.0 - c;
        t.a[0] = c;
        t.one_minus_a[0] = u;
        for (long n = 1; n <= N; ++n) {
            double up = u;
            double step = c * std::pow(up, g);
            u = up - step;
            if (!(u > 0.0))
                throw std::runtime_error("build_partition: endpoint recursion underflowed at n = " +
                                         std::to_string(n));
            auto i = static_cast<std::size_t>(n);
            t.one_minus_a[i] = u;
            t.a[i] = 1.0 - u;
            t.l[i] = step;      // a_n - a_{n-1} = c (1 - a_{n-1})^g
            t.b[i] = step;      // T_+^{-1}(-a_{n-1}) = c (1 - a_{n-1})^g, same value
        }
        return t;
    }

    const auto& p = spec.interval_params();
    double u = 1.0 - p.a;
    t.a[0] = p.a;
    t.one_minus_a[0] = u;
    for (long n = 1; n <= N; ++n) {
        double up = u;
        double step = p.a * std::pow(up, p.gamma);
        u = up - step;
        if (!(u > 0.0))
            throw std::runtime_error("build_partition: endpoint recursion underflowed at n = " +
                                     std::to_string(n));
        auto i = static_cast<std::size_t>(n);
        t.one_minus_a[i] = u;
        t.a[i] = 1.0 - u;
        t.l[i] = step;
        // S(b_n) = a_{n-1} on the cusp piece: a_{n-1} = 1 - b b_n^k
        t.b[i] = std::pow(up / p.b, 1.0 / p.kappa);
    }
    return t;
}

void export_partition_csv(const PartitionTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_partition_csv: cannot open " + path);
    out << std::setprecision(17);
    out << "n,a_n,a_minus_n,b_n,b_minus_n,l_n\n";
    out << "0," << table.a[0] << "," << -table.a[0] << ",,,\n";
    for (long n = 1; n <= table.N; ++n) {
        auto i = static_cast<std::size_t>(n);
        out << n << "," << table.a[i] << "," << -table.a[i] << "," << table.b[i] << ","
            << -table.b[i] << "," << table.l[i] << "\n";
    }
}

double tail_exponent(const MapSpec& spec) {
    if (spec.kind == MapKind::Circle) {
        double g = spec.circle_params().gamma;
        return g / (g - 1.0);
    }
    const auto& p = spec.interval_params();
    return 1.0 / (p.kappa * (p.gamma - 1.0));
}

ScalingReport scaling_constants(const PartitionTable& table) {
    const MapSpec& spec = table.spec;
    const auto n = static_cast<double>(table.N);
    const auto i = static_cast<std::size_t>(table.N);
    ScalingReport r;
    double g, u_const;
    if (spec.kind == MapKind::Circle) {
        g = spec.circle_params().gamma;
        u_const = std::pow(2.0 * g / (g - 1.0), 1.0 / (g - 1.0));
        r.l_pred = (1.0 / (2.0 * g)) * std::pow(u_const, g);
        r.b_pred = r.l_pred;
    } else {
        const auto& p = spec.interval_params();
        g = p.gamma;
        u_const = std::pow(1.0 / (p.a * (g - 1.0)), 1.0 / (g - 1.0));
        r.l_pred = p.a * std::pow(u_const, g);
        r.b_pred = std::pow(u_const / p.b, 1.0 / p.kappa);
    }
    r.u_pred = u_const;
    r.u_scaled = std::pow(n, 1.0 / (g - 1.0)) * table.one_minus_a[i];
    r.l_scaled = std::pow(n, g / (g - 1.0)) * table.l[i];
    r.b_scaled = std::pow(n, tail_exponent(spec)) * table.b[i];
    r.u_rel_dev = r.u_scaled / r.u_pred - 1.0;
    r.l_rel_dev = r.l_scaled / r.l_pred - 1.0;
    r.b_rel_dev = r.b_scaled / r.b_pred - 1.0;
    return r;
}

Cylinder cylinder(const PartitionTable& table, int m, long p, Side side) {
    if (m < 0 || p < 1) throw std::invalid_argument("cylinder: need m >= 0, p >= 1");
    if (m + p > table.N)
        throw std::out_of_range("cylinder: m + p exceeds table depth");
    Cylinder z;
    z.m = m;
    z.p = p;
    z.side = side;
    double lo = table.b[static_cast<std::size_t>(m + p)];
    double hi = (p == 1) ? table.a[static_cast<std::size_t>(m)]
                         : table.b[static_cast<std::size_t>(m + p - 1)];
    if (side == Side::Plus) {
        z.lo = lo;
        z.hi = hi;
    } else {
        z.lo = -hi;
        z.hi = -lo;
    }
    return z;
}

InducedMap build_induced(const PartitionTable& table, int m, long p_max) {
    if (p_max < 1) throw std::invalid_argument("build_induced: p_max >= 1 required");
    InducedMap im;
    im.m = m;
    im.p_max = p_max;
    im.cylinders.reserve(static_cast<std::size_t>(2 * p_max));
    for (long p = 1; p <= p_max; ++p) {
        im.cylinders.push_back(cylinder(table, m, p, Side::Plus));
        im.cylinders.push_back(cylinder(table, m, p, Side::Minus));
    }
    im.tail_length = 2.0 * table.b[static_cast<std::size_t>(m + p_max)];
    return im;
}

FirstReturn first_return(const PartitionTable& table, int m, double x, long p_cap) {
    if (m < 0 || m > table.N) throw std::invalid_argument("first_return: bad m");
    const double am = table.a[static_cast<std::size_t>(m)];
    if (!(std::abs(x) < am) || x == 0.0)
        throw std::domain_error("first_return: x not in the open reference interval");
    std::vector<double> orbit;
    orbit.push_back(x);
    long nudges = 0;
    double y = x;
    for (long p = 1; p <= p_cap; ++p) {
        y = orbit_step(table.spec, y, &nudges);
        orbit.push_back(y);
        if (std::abs(y) < am && y != 0.0) return FirstReturn{p, y};
    }
    throw FirstReturnCapExceeded(std::move(orbit));
}

double tail_measure(const PartitionTable& table, int m, long n) {
    if (m < 0 || n < 0) throw std::invalid_argument("tail_measure: need m >= 0, n >= 0");
    if (n == 0) return 2.0 * table.a[static_cast<std::size_t>(m)];
    if (m + n > table.N) throw std::out_of_range("tail_measure: m + n exceeds table depth");
    return 2.0 * table.b[static_cast<std::size_t>(m + n)];
}

IterateDerivs iterate_derivs(const MapSpec& spec, double x, long p) {
    if (p < 1) throw std::invalid_argument("iterate_derivs: p >= 1 required");
    IterateDerivs r;
    double A = 1.0, B = 0.0, logA = 0.0, y = x;
    for (long k = 0; k < p; ++k) {
        double d1 = map_deriv(spec, y, 1);
        double d2 = map_deriv(spec, y, 2);
        B = d2 * A * A + d1 * B;
        A = d1 * A;
        logA += std::log(std::abs(d1));
        y = orbit_step(spec, y);
    }
    r.value = y;
    r.d1 = A;
    r.d2 = B;
    r.log_abs_d1 = logA;
    return r;
}

DistortionScan distortion_scan(const PartitionTable& table, int m, long p_max,
                               long pairs_per_cylinder, std::uint64_t seed) {
    if (p_max < 1 || pairs_per_cylinder < 1)
        throw std::invalid_argument("distortion_scan: bad sizes");
    DistortionScan scan;
    scan.K_by_p.reserve(static_cast<std::size_t>(p_max));
    auto rng = task_rng(seed, 0);
    for (long p = 1; p <= p_max; ++p) {
        Cylinder z = cylinder(table, m, p, Side::Plus);
        // Endpoint-biased sampling: the distortion sup lives near the
        // cylinder boundary, where one orbit endpoint grazes the cusp.
        auto sample = [&](int mode) {
            double u = uniform_open(rng, 0.0, 1.0);
            switch (mode % 3) {
            case 0: return z.lo + z.length() * u;
            case 1: return z.lo + z.length() * 0.5 * u * u * u;
            default: return z.hi - z.length() * 0.5 * u * u * u;
            }
        };
        for (long j = 0; j < pairs_per_cylinder; ++j) {
            double x = sample(static_cast<int>(j));
            double y = sample(static_cast<int>(j) + 1);
            if ((rng() & 1u) != 0) y = -y; // mirror into the Minus cylinder
            IterateDerivs ix = iterate_derivs(table.spec, x, p);
            IterateDerivs iy = iterate_derivs(table.spec, y, p);
            double dl = std::abs(ix.log_abs_d1 - iy.log_abs_d1);
            double denom = std::abs(ix.value - iy.value);
            scan.worst_ratio = std::max(scan.worst_ratio, std::exp(dl));
            if (denom < 1e-12) {
                ++scan.pairs_skipped;
                continue;
            }
            ++scan.pairs_used;
            scan.K_hat = std::max(scan.K_hat, dl / denom);
        }
        scan.K_by_p.push_back(scan.K_hat);
    }
    return scan;
}

VariationCheck variation_check(const PartitionTable& table, int m, long p_max) {
    if (p_max < 1) throw std::invalid_argument("variation_check: p_max >= 1 required");
    VariationCheck vc;
    vc.increments.reserve(static_cast<std::size_t>(p_max));
    for (long p = 1; p <= p_max; ++p) {
        Cylinder z = cylinder(table, m, p, Side::Plus);
        auto integrand = [&](double t) {
            IterateDerivs d = iterate_derivs(table.spec, t, p);
            return std::abs(d.d2) / (d.d1 * d.d1);
        };
        QuadStatus st;
        double integral = adaptive_simpson(integrand, z.lo, z.hi, 1e-10, st);
        if (!st.converged)
            throw std::runtime_error("variation_check: quadrature failed on return time " +
                                     std::to_string(p));
        double sup_inv = 0;
        const int grid = 33;
        for (int i = 0; i < grid; ++i) {
            double t = z.lo + z.length() * static_cast<double>(i) / (grid - 1);
            IterateDerivs d = iterate_derivs(table.spec, t, p);
            sup_inv = std::max(sup_inv, 1.0 / std::abs(d.d1));
        }
        // Both sides contribute equally by symmetry.
        double inc = 2.0 * (integral + 2.0 * sup_inv);
        vc.increments.push_back(inc);
        vc.partial_sum += inc;
    }
    return vc;
}

KacSum kac_sum(const PartitionTable& table) {
    KacSum k;
    const auto N = table.N;
    double a0 = table.a[0];
    double prev_b = 0;
    for (long p = 1; p <= N; ++p) {
        auto i = static_cast<std::size_t>(p);
        double len = (p == 1) ? 2.0 * (a0 - table.b[1]) : 2.0 * (prev_b - table.b[i]);
        k.partial += static_cast<double>(p) * len;
        prev_b = table.b[i];
    }
    // Abel summation of the remainder, with the power-law tail of b_p
    // summed in closed form.
    double e = tail_exponent(table.spec);
    double bN = table.b[static_cast<std::size_t>(N)];
    k.tail_estimate =
        2.0 * (static_cast<double>(N + 1) * bN + bN * static_cast<double>(N) / (e - 1.0));
    return k;
}

} // namespace intermap
