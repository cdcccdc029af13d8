#include "ilshade/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ilshade {

double RandomSource::uniform_open()
{
    double u = uniform();
    while (u <= 0.0) {
        u = uniform();
    }
    return u;
}

std::size_t RandomSource::index(std::size_t n)
{
    if (n == 0) {
        throw std::invalid_argument("index: empty range");
    }
    auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
}

double RandomSource::normal()
{
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomSource::exponential()
{
    return -std::log(uniform_open());
}

double RngStream::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double ScriptedSource::uniform()
{
    if (pos_ >= draws_.size()) {
        throw std::out_of_range("ScriptedSource: draw sequence exhausted");
    }
    const double u = draws_[pos_++];
    if (!(u >= 0.0 && u < 1.0)) {
        throw std::domain_error("ScriptedSource: scripted draw outside [0, 1)");
    }
    return u;
}

}  // namespace ilshade
