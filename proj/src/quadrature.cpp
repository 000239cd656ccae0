#include "deco/quadrature.hpp"
#include "deco/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace deco {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1] (QUADPACK dqk15).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct panel {
    double a, b, value, err, resabs;
    bool operator<(const panel& o) const { return err < o.err; }
};

panel gk15_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    double fc = f(c);
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(c - h * xgk[j]);
        fv[14 - j] = f(c + h * xgk[j]);
    }
    double resk = wgk[7] * fc;
    double resg = wg[3] * fc;
    double resabs = wgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        double fsum = fv[j] + fv[14 - j];
        resk += wgk[j] * fsum;
        resabs += wgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
        if (j % 2 == 1) resg += wg[j / 2] * fsum;
    }
    double mean = 0.5 * resk;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
    resk *= h;
    resg *= h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);

    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        err = std::max(eps50 * resabs, err);
    return {a, b, resk, err, resabs};
}

} // namespace

quad_result gk15(const std::function<double(double)>& f, double a, double b) {
    panel p = gk15_panel(f, a, b);
    return {p.value, p.err, 15};
}

quad_result integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                               const quad_options& opt, std::vector<double> breakpoints) {
    if (!(b > a)) return {0.0, 0.0, 0};

    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());

    std::vector<panel> heap;
    std::size_t evals = 0;
    auto add_panel = [&](double lo, double hi) {
        heap.push_back(gk15_panel(f, lo, hi));
        std::push_heap(heap.begin(), heap.end());
        evals += 15;
    };

    double prev = a;
    for (double x : breakpoints) {
        if (x <= prev || x > b) continue;
        add_panel(prev, x);
        prev = x;
    }
    if (heap.empty()) add_panel(a, b);

    // Compensated pass over all panels; used for the final value and to
    // periodically resynchronize the incrementally tracked totals.
    auto resum = [&](double& value, double& err, double& resabs) {
        detail::kahan_sum v, e, r;
        for (const panel& p : heap) {
            v.add(p.value);
            e.add(p.err);
            r.add(p.resabs);
        }
        value = v.value();
        err = e.value();
        resabs = r.value();
    };

    double total_value, total_err, total_resabs;
    resum(total_value, total_err, total_resabs);
    // Below this scale the panel error estimates are pure roundoff; the
    // requested tolerance is unreachable and the current value is final.
    auto floor_of = [&]() {
        return 100.0 * std::numeric_limits<double>::epsilon() * total_resabs;
    };

    std::size_t since_resync = 0;
    while (true) {
        double target =
            std::max({opt.abs_tol, opt.rel_tol * std::abs(total_value), floor_of()});
        if (total_err <= target) {
            resum(total_value, total_err, total_resabs);
            if (total_err <=
                std::max({opt.abs_tol, opt.rel_tol * std::abs(total_value), floor_of()}))
                break;
        }
        if (evals + 30 > opt.max_evals)
            throw quadrature_error("quadrature budget exhausted before reaching tolerance",
                                   total_err, evals);

        std::pop_heap(heap.begin(), heap.end());
        panel worst = heap.back();
        heap.pop_back();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at floating point resolution: its estimate is final.
            worst.err = 0.0;
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            resum(total_value, total_err, total_resabs);
            if (total_err <=
                std::max({opt.abs_tol, opt.rel_tol * std::abs(total_value), floor_of()}))
                break;
            throw quadrature_error("quadrature stalled at floating point resolution",
                                   total_err, evals);
        }
        panel left = gk15_panel(f, worst.a, mid);
        panel right = gk15_panel(f, mid, worst.b);
        evals += 30;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        total_value += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        total_resabs += left.resabs + right.resabs - worst.resabs;
        if (++since_resync >= 64) {
            resum(total_value, total_err, total_resabs);
            since_resync = 0;
        }
    }
    return {total_value, total_err, evals};
}

} // namespace deco
