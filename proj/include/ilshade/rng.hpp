#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace ilshade {

// Every stochastic operation draws from a RandomSource. All derived draws
// (integer ranges, normal, exponential) are defined in terms of uniform(),
// so a scripted sequence of uniforms fully determines a run.
//
// Draw contract:
//   uniform_open()  redraws while uniform() == 0
//   index(n)        floor(u * n), one uniform
//   normal()        Box-Muller cosine branch, uniform_open() then uniform()
//   exponential()   -log(uniform_open())
class RandomSource {
public:
    virtual ~RandomSource() = default;

    // Uniform on [0, 1).
    virtual double uniform() = 0;

    double uniform_open();
    std::size_t index(std::size_t n);
    double normal();
    double exponential();
};

// Seeded Mersenne Twister stream. The 64-bit output is reduced to 53 bits,
// so the draw sequence is bit-identical across platforms for a given seed.
class RngStream final : public RandomSource {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() override;

private:
    std::mt19937_64 engine_;
};

// Replays a fixed list of uniforms; throws std::out_of_range when exhausted.
class ScriptedSource final : public RandomSource {
public:
    explicit ScriptedSource(std::vector<double> draws) : draws_(std::move(draws)) {}

    double uniform() override;

    std::size_t consumed() const { return pos_; }
    std::size_t remaining() const { return draws_.size() - pos_; }

private:
    std::vector<double> draws_;
    std::size_t pos_ = 0;
};

}  // namespace ilshade
