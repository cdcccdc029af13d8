#include "ilshade/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ilshade {

namespace {

constexpr double kPi = std::numbers::pi;

void check_gamma(const CauchyParams& p)
{
    if (!(p.gamma > 0.0)) {
        throw std::invalid_argument("Cauchy scale must be positive");
    }
}

}  // namespace

double cauchy_pdf(double x, const CauchyParams& p)
{
    check_gamma(p);
    const double d = x - p.x0;
    return p.gamma / (kPi * (d * d + p.gamma * p.gamma));
}

double cauchy_cdf(double x, const CauchyParams& p)
{
    check_gamma(p);
    return std::atan((x - p.x0) / p.gamma) / kPi + 0.5;
}

double cauchy_from_uniform(double u, const CauchyParams& p)
{
    return p.x0 + p.gamma * std::tan(kPi * (u - 0.5));
}

double cauchy_sample(const CauchyParams& p, RandomSource& rng)
{
    check_gamma(p);
    return cauchy_from_uniform(rng.uniform_open(), p);
}

double normal_sample(double mean, double sd, RandomSource& rng)
{
    return mean + sd * rng.normal();
}

void validate(const StableParams& p)
{
    if (!(p.alpha > 0.0 && p.alpha <= 2.0)) {
        throw std::invalid_argument("stable: alpha must lie in (0, 2]");
    }
    if (!(p.beta >= -1.0 && p.beta <= 1.0)) {
        throw std::invalid_argument("stable: beta must lie in [-1, 1]");
    }
    if (!(p.c > 0.0)) {
        throw std::invalid_argument("stable: scale c must be positive");
    }
}

double stable_from_vw(const StableParams& p, double v, double w)
{
    validate(p);
    const double a = p.alpha;
    const double b = p.beta;

    if (a == 1.0) {
        // (2/pi)(pi/2 + bV) written as 1 + 2bV/pi so that b = 0 gives tan(V) exactly.
        const double skew = 1.0 + 2.0 * b * v / kPi;
        double x = skew * std::tan(v);
        if (b != 0.0) {
            x -= (2.0 / kPi) * b * std::log(w * std::cos(v) / skew);
        }
        double y = p.c * x + p.mu;
        if (b != 0.0) {
            y += (2.0 / kPi) * b * p.c * std::log(p.c);
        }
        return y;
    }

    const double t = b * std::tan(kPi * a / 2.0);
    const double shift = std::atan(t) / a;
    const double scale = std::pow(1.0 + t * t, 1.0 / (2.0 * a));
    const double av = a * (v + shift);
    const double x = scale * std::sin(av) / std::pow(std::cos(v), 1.0 / a) *
                     std::pow(std::cos(v - av) / w, (1.0 - a) / a);
    return p.c * x + p.mu;
}

double stable_sample(const StableParams& p, RandomSource& rng)
{
    validate(p);
    const double v = kPi * (rng.uniform_open() - 0.5);
    const double w = rng.exponential();
    return stable_from_vw(p, v, w);
}

}  // namespace ilshade
