#include "udw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <string>

#include "udw/errors.hpp"

namespace udw {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208293061686, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b;
    Complex value;
    double err;
    // Round-off level of the panel; bisecting cannot push err below it.
    double floor;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Complex checked(const Integrand1D& f, double x) {
    Complex v = f(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os.precision(17);
        os << "integrand returned a non-finite value at x = " << x;
        throw DomainError(os.str());
    }
    return v;
}

Panel gk21(const Integrand1D& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Complex fc = checked(f, c);
    Complex kron = fc * kWgk[10];
    Complex gauss{0.0, 0.0};
    double absum = std::abs(fc) * kWgk[10];
    for (int k = 0; k < 10; ++k) {
        const double dx = h * kXgk[k];
        Complex f1 = checked(f, c - dx);
        Complex f2 = checked(f, c + dx);
        kron += kWgk[k] * (f1 + f2);
        absum += kWgk[k] * (std::abs(f1) + std::abs(f2));
        if (k % 2 == 1) gauss += kWg[k / 2] * (f1 + f2);
    }
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * absum * std::abs(h);
    Panel p{a, b, kron * h, std::max(std::abs((kron - gauss) * h), roundoff), roundoff};
    return p;
}

// Neumaier-compensated sum of complex values.
struct CompensatedSum {
    double re = 0, im = 0, cre = 0, cim = 0;
    static void add1(double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    void add(Complex z) {
        add1(re, cre, z.real());
        add1(im, cim, z.imag());
    }
    Complex value() const { return {re + cre, im + cim}; }
};

double resolve_end(double x, double radius) {
    if (std::isinf(x)) return x > 0 ? radius : -radius;
    return x;
}

}  // namespace

void QuadratureSpec::validate() const {
    std::vector<std::string> bad;
    if (!(abs_tol > 0)) bad.push_back("abs_tol must be > 0");
    if (!(rel_tol > 0)) bad.push_back("rel_tol must be > 0");
    if (max_refinements < 1) bad.push_back("max_refinements must be >= 1");
    if (!(truncation_radius > 0)) bad.push_back("truncation_radius must be > 0");
    if (!(oscillation_hint >= 0) || !std::isfinite(oscillation_hint))
        bad.push_back("oscillation_hint must be finite and >= 0");
    if (!bad.empty()) throw ConfigError(bad);
}

double QuadratureSpec::max_panel_width() const {
    if (oscillation_hint > 0) return std::numbers::pi / (4.0 * oscillation_hint);
    return std::numeric_limits<double>::infinity();
}

void EpsilonSchedule::validate() const {
    std::vector<std::string> bad;
    if (!(eps0 > 0) || !std::isfinite(eps0)) bad.push_back("eps0 must be finite and > 0");
    if (!(ratio > 0 && ratio < 1)) bad.push_back("eps ratio must lie in (0,1)");
    if (steps < 2) bad.push_back("eps steps must be >= 2");
    if (extrapolation_order < 1) bad.push_back("extrapolation_order must be >= 1");
    if (steps < extrapolation_order + 1)
        bad.push_back("eps steps must be >= extrapolation_order + 1");
    if (!bad.empty()) throw ConfigError(bad);
}

std::vector<double> EpsilonSchedule::ladder() const {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(std::max(steps, 0)));
    double e = eps0;
    for (int k = 0; k < steps; ++k) {
        out.push_back(e);
        e *= ratio;
    }
    return out;
}

IntegralEstimate integrate_1d(const Integrand1D& f, double a, double b,
                              const QuadratureSpec& spec,
                              std::span<const PoleHint> poles) {
    spec.validate();
    a = resolve_end(a, spec.truncation_radius);
    b = resolve_end(b, spec.truncation_radius);
    if (a == b) return {};
    if (a > b) {
        IntegralEstimate r = integrate_1d(f, b, a, spec, poles);
        r.value = -r.value;
        return r;
    }

    // Breakpoints: interval ends, pole real parts and the edges of each
    // pole's 10-width neighbourhood.
    std::vector<double> pts{a, b};
    for (const PoleHint& p : poles) {
        if (!(p.width > 0) || !std::isfinite(p.location)) continue;
        for (double x : {p.location - 10 * p.width, p.location, p.location + 10 * p.width})
            if (x > a && x < b) pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const double osc_width = spec.max_panel_width();
    // Hard limit on the initial partition so a degenerate request cannot
    // exhaust memory.
    constexpr long kMaxInitialPanels = 2000000;
    std::vector<Panel> heap;
    long total_initial = 0;
    for (size_t k = 0; k + 1 < pts.size(); ++k) {
        const double lo = pts[k], hi = pts[k + 1];
        const double mid = 0.5 * (lo + hi);
        double wmax = osc_width;
        for (const PoleHint& p : poles) {
            if (!(p.width > 0)) continue;
            if (std::abs(mid - p.location) < 10 * p.width) wmax = std::min(wmax, 0.5 * p.width);
        }
        long n = 1;
        if (std::isfinite(wmax)) n = std::max(1L, static_cast<long>(std::ceil((hi - lo) / wmax)));
        total_initial += n;
        if (total_initial > kMaxInitialPanels)
            throw DomainError("initial partition exceeds the panel limit; check oscillation hint and pole widths");
        const double h = (hi - lo) / static_cast<double>(n);
        for (long i = 0; i < n; ++i) {
            const double pa = lo + h * static_cast<double>(i);
            const double pb = (i + 1 == n) ? hi : lo + h * static_cast<double>(i + 1);
            heap.push_back(gk21(f, pa, pb));
        }
    }

    auto total_value = [&]() {
        CompensatedSum s;
        for (const Panel& p : heap) s.add(p.value);
        return s.value();
    };
    auto total_error = [&]() {
        double e = 0;
        for (const Panel& p : heap) e += p.err;
        return e;
    };
    auto total_floor = [&]() {
        double e = 0;
        for (const Panel& p : heap) e += p.floor;
        return e;
    };
    // Done when the tolerance is met, or when the remaining error is within
    // a factor two of the round-off level (heavy cancellation).
    auto done = [&](Complex v, double e, double fl) {
        return e <= std::max(spec.abs_tol, spec.rel_tol * std::abs(v)) || e <= 2.0 * fl;
    };

    std::make_heap(heap.begin(), heap.end());
    Complex value = total_value();
    double err = total_error();
    double fl = total_floor();
    int refinements = 0;
    std::vector<Panel> frozen;
    while (!heap.empty() && !done(value, err, fl) && refinements < spec.max_refinements) {
        std::pop_heap(heap.begin(), heap.end());
        Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            frozen.push_back(worst);
            continue;
        }
        Panel l = gk21(f, worst.a, mid);
        Panel r = gk21(f, mid, worst.b);
        value += (l.value + r.value) - worst.value;
        err += (l.err + r.err) - worst.err;
        fl += (l.floor + r.floor) - worst.floor;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end());
        ++refinements;
        // Periodically resum to keep the running totals from drifting.
        if (refinements % 256 == 0) {
            heap.insert(heap.end(), frozen.begin(), frozen.end());
            frozen.clear();
            std::make_heap(heap.begin(), heap.end());
            value = total_value();
            err = total_error();
            fl = total_floor();
        }
    }
    heap.insert(heap.end(), frozen.begin(), frozen.end());
    IntegralEstimate out;
    out.value = total_value();
    out.error_bound = total_error();
    out.refinements_used = refinements;
    out.converged = done(out.value, out.error_bound, total_floor());
    return out;
}

IntegralEstimate integrate_2d(const Integrand2D& f, double x0, double x1,
                              double y0, double y1, const QuadratureSpec& spec,
                              const PoleProvider& inner_poles,
                              double inner_oscillation,
                              std::span<const PoleHint> outer_poles) {
    spec.validate();
    x0 = resolve_end(x0, spec.truncation_radius);
    x1 = resolve_end(x1, spec.truncation_radius);
    y0 = resolve_end(y0, spec.truncation_radius);
    y1 = resolve_end(y1, spec.truncation_radius);
    QuadratureSpec inner = spec;
    if (inner_oscillation >= 0) inner.oscillation_hint = inner_oscillation;
    const double xlen = std::abs(x1 - x0);
    if (xlen > 0) inner.abs_tol = spec.abs_tol / (4.0 * xlen);
    inner.rel_tol = spec.rel_tol / 4.0;

    double worst_inner = 0.0;
    bool inner_ok = true;
    int inner_refinements = 0;
    Integrand1D outer_f = [&](double x) -> Complex {
        std::vector<PoleHint> hints;
        if (inner_poles) hints = inner_poles(x);
        IntegralEstimate r = integrate_1d([&](double y) { return f(x, y); }, y0, y1, inner, hints);
        worst_inner = std::max(worst_inner, r.error_bound);
        inner_ok = inner_ok && r.converged;
        inner_refinements += r.refinements_used;
        return r.value;
    };
    IntegralEstimate out = integrate_1d(outer_f, x0, x1, spec, outer_poles);
    out.error_bound += xlen * worst_inner;
    out.refinements_used += inner_refinements;
    out.converged = out.converged && inner_ok;
    return out;
}

IntegralEstimate integrate_semi_infinite_oscillatory(const Integrand1D& g,
                                                     double omega,
                                                     const QuadratureSpec& spec,
                                                     const OscillatoryTail& tail) {
    spec.validate();
    const bool constant_tail = tail.g_inf != Complex{0.0, 0.0};
    if (constant_tail && omega == 0.0 && !(tail.convergence_factor > 0))
        throw ContractViolation(
            "semi-infinite integral of a non-decaying integrand needs a nonzero frequency or "
            "convergence factor");

    double cut = spec.truncation_radius;
    for (const PoleHint& p : tail.poles)
        if (std::isfinite(p.location)) cut = std::max(cut, p.location + spec.truncation_radius);

    QuadratureSpec local = spec;
    local.oscillation_hint = std::max(spec.oscillation_hint, std::abs(omega));
    const Integrand1D integrand = [&](double s) {
        return std::exp(Complex(0.0, -omega * s)) * g(s);
    };
    IntegralEstimate out = integrate_1d(integrand, 0.0, cut, local, tail.poles);

    const Complex gs = g(cut);
    if (constant_tail) {
        const Complex rate(tail.convergence_factor, omega);
        out.value += tail.g_inf * std::exp(-rate * cut) / rate;
    }
    // Residual of the truncated remainder, with a unit decay length
    // (kappa-normalised kernels decay at least like e^{-s}).
    out.error_bound += std::abs(gs - tail.g_inf);
    out.converged = out.converged &&
                    std::abs(gs - tail.g_inf) <= std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
    return out;
}

ExtrapolationResult epsilon_extrapolate(std::span<const EpsilonSample> samples, int order) {
    if (order < 1) throw ArityError("extrapolation order must be >= 1");
    if (samples.size() < static_cast<size_t>(order) + 1)
        throw ArityError("epsilon extrapolation of order " + std::to_string(order) + " needs at least " +
                         std::to_string(order + 1) + " samples, got " + std::to_string(samples.size()));
    std::vector<EpsilonSample> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end(), [](const EpsilonSample& x, const EpsilonSample& y) { return x.eps < y.eps; });
    for (size_t k = 1; k < s.size(); ++k)
        if (!(s[k].eps > s[k - 1].eps)) throw ArityError("epsilon samples must be distinct");

    // Neville's scheme evaluated at ε = 0 on the first n samples.
    auto neville = [&](size_t n) {
        std::vector<Complex> p(n);
        for (size_t i = 0; i < n; ++i) p[i] = s[i].value;
        for (size_t m = 1; m < n; ++m)
            for (size_t i = 0; i + m < n; ++i) {
                const double xi = s[i].eps, xj = s[i + m].eps;
                p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
            }
        return p[0];
    };
    ExtrapolationResult r;
    r.order = order;
    r.value = neville(static_cast<size_t>(order) + 1);
    r.residual = std::abs(r.value - neville(static_cast<size_t>(order)));
    return r;
}

}  // namespace udw
