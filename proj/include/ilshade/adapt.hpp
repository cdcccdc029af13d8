#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ilshade/rng.hpp"

namespace ilshade {

// Marker stored in a CR slot whose last update batch had only CR = 0.
inline constexpr double kTerminalCR = -1.0;

// Success-history memory. Slots 0..H-2 are written cyclically; the last slot
// holds 0.9/0.9 for the whole run.
class HistoricalMemory {
public:
    explicit HistoricalMemory(std::size_t size = 5);

    std::size_t size() const { return m_f_.size(); }
    std::span<const double> m_f() const { return m_f_; }
    std::span<const double> m_cr() const { return m_cr_; }
    std::size_t update_pos() const { return pos_; }

    bool is_terminal(std::size_t slot) const { return m_cr_[slot] < 0.0; }

    // Writes slot update_pos() and advances it. Used by update_memory.
    void write(double f, double cr);

    friend bool operator==(const HistoricalMemory&, const HistoricalMemory&) = default;

private:
    std::vector<double> m_f_;
    std::vector<double> m_cr_;
    std::size_t pos_ = 0;
};

struct SuccessSet {
    std::vector<double> s_f;
    std::vector<double> s_cr;
    std::vector<double> deltas;

    // Ignores non-positive improvements.
    void add(double F, double CR, double delta);
    bool empty() const { return s_f.empty(); }
    std::size_t size() const { return s_f.size(); }
    void clear();

    friend bool operator==(const SuccessSet&, const SuccessSet&) = default;
};

struct Parameters {
    double F = 0.5;
    double CR = 0.5;
};

// Draw order: slot (one index draw), Cauchy F redrawn while F <= 0, then a
// normal CR draw unless the slot is terminal. Clamps depend on nfe / nfe_max.
Parameters assign_parameters(const HistoricalMemory& mem, std::uint64_t nfe, std::uint64_t nfe_max,
                             RandomSource& rng);

// Post-draw clamps applied to a raw (F, CR) pair; exposed for testing.
double clamp_scale_factor(double F, std::uint64_t nfe, std::uint64_t nfe_max);
double clamp_crossover_rate(double CR, std::uint64_t nfe, std::uint64_t nfe_max);

// sum(w v^2) / sum(w v), with weights normalized to sum to one.
double weighted_lehmer_mean(std::span<const double> values, std::span<const double> weights);

HistoricalMemory update_memory(HistoricalMemory mem, const SuccessSet& s);

}  // namespace ilshade
