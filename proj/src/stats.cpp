#include "ilshade/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ilshade::stats {

std::vector<double> average_ranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && values[order[end]] == values[order[start]]) ++end;
        // positions start..end-1 hold 1-based ranks start+1..end
        const double avg = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
        for (std::size_t k = start; k < end; ++k) ranks[order[k]] = avg;
        start = end;
    }
    return ranks;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_two_sided_p(double z) { return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0))); }

// ---------------------------------------------------------------------------

namespace {

constexpr double kGammaEps = 1e-15;
constexpr int kGammaMaxIter = 10000;

double gamma_p_series(double a, double x)
{
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kGammaMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kGammaEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_q_fraction(double a, double x)
{
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kGammaMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kGammaEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x)
{
    if (!(a > 0.0) || x < 0.0) {
        throw std::invalid_argument("gamma_p: need a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_fraction(a, x);
}

double gamma_q(double a, double x)
{
    if (!(a > 0.0) || x < 0.0) {
        throw std::invalid_argument("gamma_q: need a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_fraction(a, x);
}

double chi_square_sf(double x, double df)
{
    if (x <= 0.0) return 1.0;
    return gamma_q(df / 2.0, x / 2.0);
}

// ---------------------------------------------------------------------------

char symbol(Verdict v)
{
    switch (v) {
    case Verdict::Better: return '+';
    case Verdict::Worse: return '-';
    case Verdict::Indistinguishable: return '=';
    }
    return '?';
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Better: return "better";
    case Verdict::Worse: return "worse";
    case Verdict::Indistinguishable: return "indistinguishable";
    }
    return "?";
}

namespace {

struct Pooled {
    std::vector<double> ranks;  // pooled order: a then b
    double rank_sum_a = 0.0;
    double tie_term = 0.0;      // sum over tie groups of t^3 - t
};

Pooled pool(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("rank-sum test: both samples must be nonempty");
    }
    std::vector<double> all(a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    Pooled p;
    p.ranks = average_ranks(all);
    for (std::size_t k = 0; k < a.size(); ++k) p.rank_sum_a += p.ranks[k];

    std::vector<double> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t s = 0; s < sorted.size();) {
        std::size_t e = s + 1;
        while (e < sorted.size() && sorted[e] == sorted[s]) ++e;
        const double t = static_cast<double>(e - s);
        p.tie_term += t * t * t - t;
        s = e;
    }
    return p;
}

}  // namespace

double rank_sum_exact_p(std::span<const double> a, std::span<const double> b)
{
    const Pooled p = pool(a, b);
    const std::size_t na = a.size();
    const std::size_t n = p.ranks.size();

    // Doubled ranks are integers even with ties.
    std::vector<std::size_t> twice(n);
    std::size_t max_sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
        twice[k] = static_cast<std::size_t>(std::llround(2.0 * p.ranks[k]));
        max_sum += twice[k];
    }
    // ways[c][s]: subsets of size c with doubled rank sum s
    std::vector<std::vector<double>> ways(na + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = std::min(na, k + 1); c >= 1; --c) {
            for (std::size_t s = max_sum; s >= twice[k]; --s) {
                ways[c][s] += ways[c - 1][s - twice[k]];
                if (s == twice[k]) break;
            }
        }
    }
    const auto observed = static_cast<std::size_t>(std::llround(2.0 * p.rank_sum_a));
    double total = 0.0;
    double low = 0.0;
    double high = 0.0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
        const double w = ways[na][s];
        total += w;
        if (s <= observed) low += w;
        if (s >= observed) high += w;
    }
    return std::min(1.0, 2.0 * std::min(low, high) / total);
}

double rank_sum_normal_p(std::span<const double> a, std::span<const double> b)
{
    const Pooled p = pool(a, b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double n = na + nb;
    const double u = p.rank_sum_a - na * (na + 1.0) / 2.0;
    const double mean = na * nb / 2.0;
    const double var = na * nb / 12.0 * ((n + 1.0) - p.tie_term / (n * (n - 1.0)));
    if (!(var > 0.0)) {
        return 1.0;
    }
    return normal_two_sided_p((u - mean) / std::sqrt(var));
}

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, double alpha)
{
    const Pooled p = pool(a, b);
    RankSumResult r;
    r.rank_sum = p.rank_sum_a;

    const bool all_equal =
        std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; }) &&
        std::all_of(b.begin(), b.end(), [&](double v) { return v == a[0]; });
    if (all_equal) {
        r.p_value = 1.0;
        r.verdict = Verdict::Indistinguishable;
        return r;
    }

    r.exact = std::min(a.size(), b.size()) < 10;
    r.p_value = r.exact ? rank_sum_exact_p(a, b) : rank_sum_normal_p(a, b);

    const double na = static_cast<double>(a.size());
    const double expected = na * (static_cast<double>(p.ranks.size()) + 1.0) / 2.0;
    if (r.p_value < alpha && r.rank_sum != expected) {
        r.verdict = r.rank_sum < expected ? Verdict::Better : Verdict::Worse;
    }
    return r;
}

// ---------------------------------------------------------------------------

FriedmanResult friedman_from_average_ranks(std::span<const double> avg, std::size_t problems)
{
    const std::size_t k = avg.size();
    if (k < 2 || problems < 2) {
        throw std::invalid_argument("friedman: need at least 2 problems and 2 algorithms");
    }
    const double kk = static_cast<double>(k);
    const double n = static_cast<double>(problems);
    double sum_sq = 0.0;
    for (double r : avg) sum_sq += r * r;

    FriedmanResult fr;
    fr.average_ranks.assign(avg.begin(), avg.end());
    fr.problems = problems;
    fr.chi_square = 12.0 * n / (kk * (kk + 1.0)) * (sum_sq - kk * (kk + 1.0) * (kk + 1.0) / 4.0);
    fr.df = kk - 1.0;
    fr.p_value = chi_square_sf(fr.chi_square, fr.df);
    return fr;
}

FriedmanResult friedman(const std::vector<std::vector<double>>& scores)
{
    if (scores.size() < 2) {
        throw std::invalid_argument("friedman: need at least 2 problems");
    }
    const std::size_t k = scores.front().size();
    std::vector<double> sums(k, 0.0);
    for (const auto& row : scores) {
        if (row.size() != k) {
            throw std::invalid_argument("friedman: ragged score matrix");
        }
        const auto ranks = average_ranks(row);
        for (std::size_t j = 0; j < k; ++j) sums[j] += ranks[j];
    }
    for (auto& s : sums) s /= static_cast<double>(scores.size());
    return friedman_from_average_ranks(sums, scores.size());
}

double friedman_z(double rank_control, double rank_other, std::size_t k, std::size_t n)
{
    const double kk = static_cast<double>(k);
    const double se = std::sqrt(kk * (kk + 1.0) / (6.0 * static_cast<double>(n)));
    return (rank_control - rank_other) / se;
}

std::vector<double> hochberg_adjust(std::span<const double> p_values)
{
    const std::size_t m = p_values.size();
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("hochberg_adjust: p-value outside [0, 1]");
        }
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    std::vector<double> adjusted(m);
    double running = 1.0;
    for (std::size_t pos = m; pos-- > 0;) {
        const double factor = static_cast<double>(m - pos);
        running = std::min(running, factor * p_values[order[pos]]);
        adjusted[order[pos]] = std::min(1.0, running);
    }
    return adjusted;
}

std::vector<PostHocRow> friedman_post_hoc(const FriedmanResult& fr, std::size_t control)
{
    const std::size_t k = fr.average_ranks.size();
    if (control >= k) {
        throw std::out_of_range("friedman_post_hoc: control index out of range");
    }
    std::vector<PostHocRow> rows;
    std::vector<double> raw;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == control) continue;
        PostHocRow row;
        row.algorithm = j;
        row.z = friedman_z(fr.average_ranks[control], fr.average_ranks[j], k, fr.problems);
        row.p_value = normal_two_sided_p(row.z);
        raw.push_back(row.p_value);
        rows.push_back(row);
    }
    const auto adj = hochberg_adjust(raw);
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r].adjusted_p = adj[r];
    return rows;
}

}  // namespace ilshade::stats
