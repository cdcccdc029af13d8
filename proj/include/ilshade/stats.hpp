#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ilshade::stats {

// 1-based ranks, ties share the average rank.
std::vector<double> average_ranks(std::span<const double> values);

double normal_cdf(double z);
// Two-sided p-value for a standard normal statistic.
double normal_two_sided_p(double z);

// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);
// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double df);

enum class Verdict { Better, Worse, Indistinguishable };
char symbol(Verdict v);  // '+', '-', '='
std::string_view to_string(Verdict v);

struct RankSumResult {
    Verdict verdict = Verdict::Indistinguishable;
    double p_value = 1.0;
    // Rank sum of the first sample in the pooled ranking.
    double rank_sum = 0.0;
    bool exact = false;
};

// Exact two-sided p over all C(n, n_a) rank assignments (ties kept).
double rank_sum_exact_p(std::span<const double> a, std::span<const double> b);
// Normal approximation with tie-corrected variance, no continuity correction.
double rank_sum_normal_p(std::span<const double> a, std::span<const double> b);

// Minimization: "Better" means a tends to lower values than b at level
// alpha. Exact when min(|a|, |b|) < 10, normal approximation otherwise.
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                                double alpha = 0.05);

struct FriedmanResult {
    std::vector<double> average_ranks;
    double chi_square = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    std::size_t problems = 0;
};

// scores[problem][algorithm], lower is better.
FriedmanResult friedman(const std::vector<std::vector<double>>& scores);
// Statistic from precomputed average ranks over n problems.
FriedmanResult friedman_from_average_ranks(std::span<const double> average_ranks,
                                           std::size_t problems);

// (R_control - R_other) / sqrt(k (k + 1) / (6 n))
double friedman_z(double rank_control, double rank_other, std::size_t k, std::size_t n);

// Hochberg step-up adjusted p-values, in input order.
std::vector<double> hochberg_adjust(std::span<const double> p_values);

struct PostHocRow {
    std::size_t algorithm = 0;
    double z = 0.0;
    double p_value = 1.0;
    double adjusted_p = 1.0;
};

// Every algorithm other than control against control, in column order.
std::vector<PostHocRow> friedman_post_hoc(const FriedmanResult& fr, std::size_t control);

}  // namespace ilshade::stats
