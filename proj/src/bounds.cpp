#include "deco/bounds.hpp"
#include "deco/errors.hpp"
#include "deco/fock.hpp"
#include "deco/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace deco {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

void sector_spec::validate() const {
    require(f_eigenvalues.size() >= 1, "spec needs at least one eigenvalue");
    require(hs_eigenvalues.size() == 0 || hs_eigenvalues.size() == f_eigenvalues.size(),
            "H_S eigenvalue list must be empty or match F");
    require(delta1.hi >= delta1.lo && delta2.hi >= delta2.lo, "intervals must be ordered");
    require(delta2.lo > delta1.hi || delta1.lo > delta2.hi, "intervals must be disjoint");
}

double sector_spec::gap() const {
    return delta2.lo > delta1.hi ? delta2.lo - delta1.hi : delta1.lo - delta2.hi;
}

std::vector<int> sector_spec::members(const interval& iv) const {
    std::vector<int> idx;
    for (int a = 0; a < f_eigenvalues.size(); ++a)
        if (iv.contains(f_eigenvalues(a))) idx.push_back(a);
    return idx;
}

Eigen::MatrixXcd assemble_heisenberg(const Eigen::MatrixXcd& a, const sector_spec& spec,
                                     const dephasing_kernel::snapshot& kernel, double t) {
    spec.validate();
    const int d = static_cast<int>(spec.f_eigenvalues.size());
    require(a.rows() == d && a.cols() == d, "observable dimension mismatch");

    Eigen::MatrixXcd out(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            out(r, c) = kernel.chi(spec.f_eigenvalues(r), spec.f_eigenvalues(c)) * a(r, c);
    if (spec.hs_eigenvalues.size() == d) {
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                out(r, c) *= std::exp(cplx(0.0, (spec.hs_eigenvalues(r) - spec.hs_eigenvalues(c)) * t));
    }
    return out;
}

double offdiag_norm(const Eigen::MatrixXcd& a_t, const sector_spec& spec) {
    auto rows = spec.members(spec.delta1);
    auto cols = spec.members(spec.delta2);
    if (rows.empty() || cols.empty()) return 0.0;
    Eigen::MatrixXcd block(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) block(r, c) = a_t(rows[r], cols[c]);
    return operator_norm(block);
}

namespace {

kernel_sup_bounds sup_on_grid(const dephasing_kernel::snapshot& kernel, interval d1,
                              interval d2, sup_mode mode, int n) {
    kernel_sup_bounds out;
    double h_fd = 1e-5 * std::max(d2.length(), 1e-6);
    for (int i = 0; i < n; ++i) {
        double alpha = d1.lo + (d1.length()) * (n == 1 ? 0.5 : double(i) / (n - 1));
        for (int j = 0; j < n; ++j) {
            double beta = d2.lo + (d2.length()) * (n == 1 ? 0.5 : double(j) / (n - 1));
            out.c1 = std::max(out.c1, std::abs(kernel.chi(alpha, beta)));
            double dm;
            if (mode == sup_mode::analytic && kernel.deriv_mag) {
                dm = kernel.deriv_mag(alpha, beta);
            } else {
                cplx db = (kernel.chi(alpha, beta + h_fd) - kernel.chi(alpha, beta - h_fd)) /
                          (2.0 * h_fd);
                cplx da = (kernel.chi(alpha + h_fd, beta) - kernel.chi(alpha - h_fd, beta)) /
                          (2.0 * h_fd);
                dm = std::max(std::abs(da), std::abs(db));
            }
            out.c2 = std::max(out.c2, dm);
        }
    }
    return out;
}

} // namespace

kernel_sup_bounds sup_kernel_bounds(const dephasing_kernel::snapshot& kernel, interval d1,
                                    interval d2, sup_mode mode, int base_grid) {
    kernel_sup_bounds coarse = sup_on_grid(kernel, d1, d2, mode, base_grid);
    kernel_sup_bounds fine = sup_on_grid(kernel, d1, d2, mode, 2 * base_grid - 1);
    double change = 0.0;
    if (fine.c1 > 0.0) change = std::max(change, (fine.c1 - coarse.c1) / fine.c1);
    if (fine.c2 > 0.0) change = std::max(change, (fine.c2 - coarse.c2) / fine.c2);
    fine.refinement_change = change;
    fine.refinement_warning = change > 0.01;
    return fine;
}

namespace {

sector_bound_report verify_impl(const Eigen::MatrixXcd& a, const sector_spec& spec,
                                const dephasing_kernel& kernel,
                                const std::vector<double>& times, double slack,
                                const envelope_spec* supplied, bool parallel) {
    spec.validate();
    require(!times.empty(), "time grid must be non-empty");
    const double a_norm = operator_norm(a);
    const double delta = spec.gap();

    sector_bound_report rep;
    rep.times = times;
    rep.measured.resize(times.size());
    rep.bound_e3.resize(times.size());
    rep.envelope.assign(times.size(), 0.0);
    rep.kernel_id = kernel.describe();
    std::vector<double> psis(times.size());

    auto eval = [&](std::size_t j) {
        double t = times[j];
        auto snap = kernel.at(t);
        psis[j] = snap.psi;
        Eigen::MatrixXcd at = assemble_heisenberg(a, spec, snap, t);
        rep.measured[j] = offdiag_norm(at, spec);
        auto sup = sup_kernel_bounds(snap, spec.delta1, spec.delta2,
                                     snap.deriv_mag ? sup_mode::analytic
                                                    : sup_mode::finite_difference);
        rep.bound_e3[j] = (2.0 * sup.c1 + spec.delta2.length() * sup.c2) * a_norm;
    };
    if (parallel)
        parallel_for(times.size(), eval);
    else
        serial_for(times.size(), eval);

    rep.max_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < times.size(); ++j)
        rep.max_margin = std::max(rep.max_margin, rep.measured[j] - rep.bound_e3[j]);
    if (rep.max_margin > slack) {
        std::ostringstream os;
        os << "sector norm exceeds the uniform bound by " << rep.max_margin
           << " (kernel " << rep.kernel_id << ")";
        throw bound_violation(os.str());
    }

    // Envelope const·(1+δ²ψ)^{-γ}: supplied, or fitted on log scale over
    // the positive samples.
    if (supplied) {
        rep.fit_const = supplied->scale;
        rep.fit_gamma = supplied->gamma;
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t j = 0; j < times.size(); ++j) {
            if (rep.measured[j] <= 0.0) continue;
            double x = std::log1p(delta * delta * psis[j]);
            double y = std::log(rep.measured[j]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        if (n >= 2 && sxx * n - sx * sx > 1e-30) {
            double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            double inter = (sy - slope * sx) / n;
            rep.fit_gamma = -slope;
            rep.fit_const = std::exp(inter);
        }
    }
    if (rep.fit_const > 0.0)
        for (std::size_t j = 0; j < times.size(); ++j)
            rep.envelope[j] =
                rep.fit_const * std::pow(1.0 + delta * delta * psis[j], -rep.fit_gamma);
    return rep;
}

} // namespace

sector_bound_report verify_bound(const Eigen::MatrixXcd& a, const sector_spec& spec,
                                 const dephasing_kernel& kernel,
                                 const std::vector<double>& times, double slack,
                                 const envelope_spec* supplied) {
    return verify_impl(a, spec, kernel, times, slack, supplied, true);
}

sector_bound_report verify_bound_serial(const Eigen::MatrixXcd& a, const sector_spec& spec,
                                        const dephasing_kernel& kernel,
                                        const std::vector<double>& times, double slack,
                                        const envelope_spec* supplied) {
    return verify_impl(a, spec, kernel, times, slack, supplied, false);
}

} // namespace deco
