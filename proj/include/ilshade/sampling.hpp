#pragma once

#include "ilshade/rng.hpp"

namespace ilshade {

struct CauchyParams {
    double x0 = 0.0;
    double gamma = 1.0;
};

// S_alpha(beta, c, mu) in the Chambers-Mallows-Stuck parameterization.
struct StableParams {
    double alpha = 1.0;
    double beta = 0.0;
    double c = 1.0;
    double mu = 0.0;
};

double cauchy_pdf(double x, const CauchyParams& p);
double cauchy_cdf(double x, const CauchyParams& p);

// Inverse-CDF draw: x0 + gamma * tan(pi * (u - 1/2)), u from the open interval.
double cauchy_from_uniform(double u, const CauchyParams& p);
double cauchy_sample(const CauchyParams& p, RandomSource& rng);

double normal_sample(double mean, double sd, RandomSource& rng);

void validate(const StableParams& p);

// Deterministic CMS transform of V in (-pi/2, pi/2) and W > 0.
double stable_from_vw(const StableParams& p, double v, double w);

// Draws V = pi * (u - 1/2) from an open uniform, then W ~ Exp(1).
double stable_sample(const StableParams& p, RandomSource& rng);

}  // namespace ilshade
