#include "ilshade/adapt.hpp"

#include <algorithm>
#include <stdexcept>

#include "ilshade/sampling.hpp"

namespace ilshade {

HistoricalMemory::HistoricalMemory(std::size_t size)
{
    if (size < 2) {
        throw std::invalid_argument("HistoricalMemory: need at least two slots");
    }
    m_f_.assign(size, 0.3);
    m_cr_.assign(size, 0.8);
    m_f_.back() = 0.9;
    m_cr_.back() = 0.9;
}

void HistoricalMemory::write(double f, double cr)
{
    m_f_[pos_] = f;
    m_cr_[pos_] = cr;
    pos_ = (pos_ + 1) % (m_f_.size() - 1);
}

void SuccessSet::add(double F, double CR, double delta)
{
    if (!(delta > 0.0)) {
        return;
    }
    s_f.push_back(F);
    s_cr.push_back(CR);
    deltas.push_back(delta);
}

void SuccessSet::clear()
{
    s_f.clear();
    s_cr.clear();
    deltas.clear();
}

double clamp_scale_factor(double F, std::uint64_t nfe, std::uint64_t nfe_max)
{
    F = std::min(F, 1.0);
    if (static_cast<double>(nfe) < 0.6 * static_cast<double>(nfe_max) && F > 0.7) {
        F = 0.7;
    }
    return F;
}

double clamp_crossover_rate(double CR, std::uint64_t nfe, std::uint64_t nfe_max)
{
    CR = std::clamp(CR, 0.0, 1.0);
    const double n = static_cast<double>(nfe);
    const double budget = static_cast<double>(nfe_max);
    if (n < 0.25 * budget) {
        CR = std::max(CR, 0.7);
    } else if (n < 0.5 * budget) {
        CR = std::max(CR, 0.6);
    }
    return CR;
}

Parameters assign_parameters(const HistoricalMemory& mem, std::uint64_t nfe, std::uint64_t nfe_max,
                             RandomSource& rng)
{
    const std::size_t slot = rng.index(mem.size());
    const double mu_f = mem.m_f()[slot];
    const double mu_cr = mem.m_cr()[slot];

    double F = 0.0;
    do {
        F = cauchy_sample({mu_f, 0.1}, rng);
    } while (F <= 0.0);

    double CR = 0.0;
    if (!mem.is_terminal(slot)) {
        CR = normal_sample(mu_cr, 0.1, rng);
    }
    return {clamp_scale_factor(F, nfe, nfe_max), clamp_crossover_rate(CR, nfe, nfe_max)};
}

double weighted_lehmer_mean(std::span<const double> values, std::span<const double> weights)
{
    if (values.empty()) {
        throw std::invalid_argument("weighted_lehmer_mean: empty input");
    }
    if (values.size() != weights.size()) {
        throw std::invalid_argument("weighted_lehmer_mean: length mismatch");
    }
    double weight_total = 0.0;
    for (double w : weights) {
        if (w < 0.0) {
            throw std::invalid_argument("weighted_lehmer_mean: negative weight");
        }
        weight_total += w;
    }
    if (!(weight_total > 0.0)) {
        throw std::invalid_argument("weighted_lehmer_mean: weights sum to zero");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double w = weights[k] / weight_total;
        num += w * values[k] * values[k];
        den += w * values[k];
    }
    // All-zero values (e.g. every successful CR was 0).
    if (den == 0.0) {
        return 0.0;
    }
    return num / den;
}

HistoricalMemory update_memory(HistoricalMemory mem, const SuccessSet& s)
{
    if (s.empty()) {
        return mem;
    }
    const double f = weighted_lehmer_mean(s.s_f, s.deltas);
    const double max_cr = *std::max_element(s.s_cr.begin(), s.s_cr.end());
    const double cr = max_cr == 0.0 ? kTerminalCR : weighted_lehmer_mean(s.s_cr, s.deltas);
    mem.write(f, cr);
    return mem;
}

}  // namespace ilshade
