#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <valarray>
#include <vector>

namespace d2d {

// Tolerances for the numerical integrations behind the analytic engine.
struct QuadratureSpec {
    double rel_tol = 1e-7;
    double abs_tol = 1e-9;
    double omega_max = 1e6;       // cap on the characteristic-function truncation
    int max_subdivisions = 4000;

    void validate() const
    {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("QuadratureSpec: tolerances must be > 0");
        if (!(omega_max > 0.0))
            throw std::invalid_argument("QuadratureSpec: omega_max must be > 0");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    }
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved, double requested)
        : std::runtime_error(what + " (achieved error " + std::to_string(achieved) + ", requested " +
                             std::to_string(requested) + ")"),
          achieved_(achieved), requested_(requested)
    {
    }
    double achieved() const { return achieved_; }
    double requested() const { return requested_; }

private:
    double achieved_;
    double requested_;
};

template <class V>
struct QuadResult {
    V value;
    double error = 0.0;
    int evaluations = 0;
};

inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(const std::complex<double>& v) { return std::abs(v); }
inline double quad_norm(const std::valarray<double>& v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 abscissae and weights).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Segment {
    double a, b;
    V value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F, class V>
Segment<V> gk15(F& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    V fc = f(c);
    V kron = kWgk[7] * fc;
    V gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        V f1 = f(c - dx);
        V f2 = f(c + dx);
        V sum = f1 + f2;
        kron = kron + kWgk[j] * sum;
        if (j % 2 == 1)
            gauss = gauss + kWg[j / 2] * sum;
    }
    V k = h * kron;
    V g = h * gauss;
    V diff = k - g;
    return {a, b, k, quad_norm(diff)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod over consecutive breakpoints. Splits the worst
// segment until the summed error estimate meets max(abs_tol, rel_tol*|I|).
// On exhaustion of max_subdivisions throws QuadratureError unless allow_partial.
template <class F, class V = std::invoke_result_t<F&, double>>
QuadResult<V> integrate(F&& f, std::span<const double> breakpoints, double abs_tol, double rel_tol,
                        int max_subdivisions = 4000, bool allow_partial = false)
{
    if (breakpoints.size() < 2)
        throw std::invalid_argument("integrate: need at least two breakpoints");
    std::priority_queue<detail::Segment<V>> heap;
    int evals = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] == breakpoints[i])
            continue;
        heap.push(detail::gk15<F, V>(f, breakpoints[i], breakpoints[i + 1]));
        evals += 15;
    }
    if (heap.empty()) {
        V zero = f(breakpoints.front());
        zero = 0.0 * zero;
        return {zero, 0.0, 1};
    }

    auto totals = [&heap]() {
        auto copy = heap;
        V sum = copy.top().value;
        double err = copy.top().error;
        copy.pop();
        while (!copy.empty()) {
            sum = sum + copy.top().value;
            err += copy.top().error;
            copy.pop();
        }
        return std::pair<V, double>(sum, err);
    };

    auto [total, total_err] = totals();
    int splits = 0;
    while (total_err > std::max(abs_tol, rel_tol * quad_norm(total))) {
        if (splits >= max_subdivisions) {
            if (allow_partial)
                break;
            throw QuadratureError("integrate: subdivision limit reached", total_err,
                                  std::max(abs_tol, rel_tol * quad_norm(total)));
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval can no longer be split in double precision.
            if (allow_partial)
                break;
            throw QuadratureError("integrate: interval underflow", total_err,
                                  std::max(abs_tol, rel_tol * quad_norm(total)));
        }
        auto left = detail::gk15<F, V>(f, worst.a, mid);
        auto right = detail::gk15<F, V>(f, mid, worst.b);
        evals += 30;
        total = total - worst.value + left.value + right.value;
        total_err += left.error + right.error - worst.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
        ++splits;
        if (splits % 64 == 0) {
            auto fresh = totals();
            total = fresh.first;
            total_err = fresh.second;
        }
    }
    auto fresh = totals();
    return {fresh.first, fresh.second, evals};
}

template <class F, class V = std::invoke_result_t<F&, double>>
QuadResult<V> integrate(F&& f, double a, double b, double abs_tol, double rel_tol, int max_subdivisions = 4000)
{
    const double bp[2] = {a, b};
    return integrate<F, V>(std::forward<F>(f), std::span<const double>(bp, 2), abs_tol, rel_tol, max_subdivisions);
}

}  // namespace d2d
