// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ilshade/bench.hpp"
#include "ilshade/engine.hpp"
#include "ilshade/sampling.hpp"
#include "ilshade/stats.hpp"
#include "lshade_reference.hpp"
#include "properties.hpp"

using namespace ilshade;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int prec = 4)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

// Runs job(k) for k in [0, n) on all cores.
template <typename T>
std::vector<T> parallel(std::size_t n, const std::function<T(std::size_t)>& job)
{
    std::vector<T> out(n);
    std::atomic<std::size_t> next{0};
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k; (k = next++) < n;) out[k] = job(k);
            });
        }
    }
    return out;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> fevs(const std::vector<RunRecord>& recs)
{
    std::vector<double> v;
    for (const auto& r : recs) v.push_back(r.fev);
    return v;
}

// ---------------------------------------------------------------------------

const std::vector<double> kRanks{4.15, 4.42, 5.30, 5.23, 6.12, 7.05, 7.35, 9.97, 7.87, 7.62, 7.90, 5.03};
const std::vector<double> kTableZ{-0.286, -1.24, -1.16, -2.11, -3.12, -3.44, -6.25, -3.99, -3.72, -4.03, -0.949};
const std::vector<double> kTableAdj{7.75e-1, 8.67e-1, 7.34e-1, 1.73e-1, 1.10e-2, 4.11e-3,
                                    4.57e-9, 5.89e-4, 1.57e-3, 5.62e-4, 6.85e-1};

Verdict friedman_reproduction()
{
    const auto fr = stats::friedman_from_average_ranks(kRanks, 30);
    const auto rows = stats::friedman_post_hoc(fr, 0);
    double worst = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) worst = std::max(worst, std::abs(rows[k].z - kTableZ[k]));
    const bool ok = std::abs(fr.chi_square - 76.90) <= 1.0 && worst <= 0.02 && rows.size() == 11;
    return {ok, "chi2=" + fmt(fr.chi_square) + " max|dz|=" + fmt(worst, 3)};
}

Verdict hochberg_spot_checks()
{
    const auto fr = stats::friedman_from_average_ranks(kRanks, 30);
    const auto rows = stats::friedman_post_hoc(fr, 0);
    std::size_t within = 0;
    std::string misses;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double rel = std::abs(rows[k].adjusted_p - kTableAdj[k]) / kTableAdj[k];
        if (rel <= 0.10) {
            ++within;
        } else {
            misses += " row" + std::to_string(k + 2) + "(" + fmt(rel * 100, 3) + "%)";
        }
    }
    return {within >= 8, std::to_string(within) + "/11 within 10%" + (misses.empty() ? "" : ", off:" + misses)};
}

// Compares library and reference state; returns an empty string when equal.
std::string state_diff(const IlshadeRsp& alg, const lshade_ref::State& st)
{
    const auto& pop = alg.population();
    if (pop.nfe != st.nfe) return "nfe";
    if (pop.size() != st.pop.size()) return "population size";
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const auto& a = pop.members[i];
        const auto& b = st.pop[i];
        if (a.x != b.x || a.f != b.f) return "member " + std::to_string(i);
    }
    if (pop.archive.size() != st.archive.size()) return "archive size";
    for (std::size_t k = 0; k < st.archive.size(); ++k) {
        if (pop.archive[k].x != st.archive[k].x || pop.archive[k].f != st.archive[k].f) return "archive entry";
    }
    const auto mf = alg.memory().m_f(), mcr = alg.memory().m_cr();
    if (!std::equal(mf.begin(), mf.end(), st.mem_f.begin(), st.mem_f.end()) ||
        !std::equal(mcr.begin(), mcr.end(), st.mem_cr.begin(), st.mem_cr.end()) ||
        alg.memory().update_pos() != st.mem_pos) {
        return "memory";
    }
    return {};
}

Verdict lshade_rsp_equivalence()
{
    const auto spec = bench::make_problem("rastrigin", 10);
    const auto obj = spec.objective();
    const auto fn = [&](const std::vector<double>& x) { return obj.evaluate(x); };
    RunConfig cfg;
    cfg.jumping_rate = 0.0;
    cfg = cfg.resolved(10);
    lshade_ref::Settings s;
    s.np_init = cfg.np_init;
    s.nfe_max = cfg.nfe_max;
    s.lower.assign(10, spec.lower);
    s.upper.assign(10, spec.upper);

    const auto results = parallel<std::string>(20, [&](std::size_t k) -> std::string {
        const std::uint64_t seed = 1000 + 17 * k;
        RngStream rng(seed);
        IlshadeRsp alg(cfg, obj, rng);
        const auto u = lshade_ref::mt_uniform(seed);
        lshade_ref::State st = lshade_ref::initialize(s, fn, u);
        if (auto d = state_diff(alg, st); !d.empty()) return "seed " + std::to_string(seed) + " init: " + d;
        while (!alg.finished()) {
            alg.step();
            lshade_ref::generation(st, s, fn, u);
            if (auto d = state_diff(alg, st); !d.empty()) {
                return "seed " + std::to_string(seed) + " gen " + std::to_string(st.generation) + ": " + d;
            }
        }
        if (st.nfe < s.nfe_max) return "seed " + std::to_string(seed) + ": reference unfinished";
        if (alg.perturbed_trials() != 0 || st.jumps != 0) return "seed " + std::to_string(seed) + ": perturbed branch taken";
        const RunRecord rec = alg.record();
        if (rec.best_f != st.best_f || rec.best_x != st.best_x) return "seed " + std::to_string(seed) + ": best";
        return {};
    });
    for (const auto& r : results) {
        if (!r.empty()) return {false, r};
    }
    return {true, "20 seeds, " + std::to_string(cfg.nfe_max) + " evaluations each, every generation identical, 0 perturbed trials"};
}

Verdict one_generation_oracle()
{
    const ObjectiveFunction obj("sphere", Bounds::uniform(3, -100, 100), [](std::span<const double> x) {
        return x[0] * x[0] + 2 * x[1] * x[1] + 3 * x[2] * x[2];
    }, 0.0);
    const auto fn = [&](const std::vector<double>& x) { return obj.evaluate(x); };
    RunConfig cfg;
    cfg.np_init = 5;
    cfg.np_fin = 4;
    cfg.nfe_max = 15;
    cfg.jumping_rate = 0.2;
    cfg.trace_points = 3;
    lshade_ref::Settings s;
    s.np_init = 5;
    s.np_fin = 4;
    s.nfe_max = 15;
    s.jumping_rate = 0.2;
    s.lower.assign(3, -100);
    s.upper.assign(3, 100);

    // First fixed stream whose generation exercises jumps, successes and archive trimming.
    for (std::uint64_t script_seed = 1; script_seed < 500; ++script_seed) {
        std::mt19937_64 gen(script_seed);
        std::vector<double> draws(4000);
        for (auto& d : draws) d = static_cast<double>(gen() >> 11) * 0x1p-53;

        std::size_t pos = 0;
        const lshade_ref::Uniform u = [&]() -> double {
            if (pos == draws.size()) throw std::runtime_error("script exhausted");
            return draws[pos++];
        };
        lshade_ref::State st = lshade_ref::initialize(s, fn, u);
        lshade_ref::generation(st, s, fn, u);
        if (st.jumps == 0 || st.s_f.size() < 2 || st.archive.size() != st.pop.size()) continue;

        ScriptedSource script(draws);
        IlshadeRsp alg(cfg, obj, script);
        alg.step();
        std::string diff = state_diff(alg, st);
        for (std::size_t i = 0; diff.empty() && i < st.pop.size(); ++i) {
            const auto& m = alg.population().members[i];
            if (m.F != st.pop[i].F || m.CR != st.pop[i].CR) diff = "F/CR of member " + std::to_string(i);
        }
        const auto& sc = alg.successes();
        if (diff.empty() && (sc.s_f != st.s_f || sc.s_cr != st.s_cr || sc.deltas != st.s_delta)) diff = "success sets";
        if (diff.empty() && alg.perturbed_trials() != st.jumps) diff = "perturbed count";
        if (diff.empty() && script.consumed() != pos) {
            diff = "draws consumed " + std::to_string(script.consumed()) + " vs " + std::to_string(pos);
        }
        if (!diff.empty()) return {false, "script " + std::to_string(script_seed) + ": " + diff};
        return {true, "script " + std::to_string(script_seed) + ": " + std::to_string(pos) + " draws, " +
                          std::to_string(st.jumps) + " jumps, " + std::to_string(st.s_f.size()) +
                          " successes, all fields equal"};
    }
    return {false, "no script exercised the required paths"};
}

Verdict schedule_exactness()
{
    const std::uint64_t n = 1000;
    std::vector<std::string> bad;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) bad.emplace_back(what);
    };
    expect(lpsr_next_size(100, 4, 0, n) == 100, "lpsr start");
    expect(lpsr_next_size(100, 4, n / 2, n) == 52, "lpsr midpoint");
    expect(lpsr_next_size(100, 4, n, n) == 4, "lpsr end");
    expect(pbest_fraction(0, n) == 0.085, "p start");
    expect(pbest_fraction(n, n) == 0.17, "p end");
    const double F = 0.5;
    expect(pbest_weight(F, n / 10, n) == 0.7 * F, "F_w at 0.1");
    expect(pbest_weight(F, 3 * n / 10, n) == 0.8 * F, "F_w at 0.3");
    expect(pbest_weight(F, n / 2, n) == 1.2 * F, "F_w at 0.5");
    expect(clamp_crossover_rate(0.1, n / 10, n) == 0.7, "CR floor 0.7");
    expect(clamp_crossover_rate(0.1, n / 4, n) == 0.6, "CR floor 0.6 start");
    expect(clamp_crossover_rate(0.1, 3 * n / 10, n) == 0.6, "CR floor 0.6");
    expect(clamp_crossover_rate(0.1, n / 2, n) == 0.1, "no CR floor");
    expect(clamp_crossover_rate(0.9, n / 10, n) == 0.9, "CR above floor");
    if (!bad.empty()) {
        std::string d;
        for (const auto& b : bad) d += b + "; ";
        return {false, d};
    }
    return {true, "lpsr 100/52/4, p 0.085/0.17, F_w 0.7/0.8/1.2, CR floors 0.7/0.6"};
}

Verdict sampler_statistics()
{
    // alpha 1, beta 0: exactly tan(V) for each scripted pair
    std::size_t exact = 0, total = 0;
    for (int k = 1; k < 1000; ++k) {
        const double u = k / 1000.0;
        ScriptedSource s({u, 0.37});
        exact += stable_sample({1.0, 0.0, 1.0, 0.0}, s) == std::tan(std::numbers::pi * (u - 0.5));
        ++total;
    }

    const std::size_t n = 1'000'000;
    RngStream rng(20240601);
    double mean = 0, m2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = stable_sample({2.0, 0.0, 1.0, 0.0}, rng);
        const double d = x - mean;
        mean += d / static_cast<double>(k + 1);
        m2 += d * (x - mean);
    }
    const double var = m2 / static_cast<double>(n - 1);

    const CauchyParams cp{0.5, 2.0};
    std::vector<double> xs(n);
    for (auto& x : xs) x = cauchy_sample(cp, rng);
    std::nth_element(xs.begin(), xs.begin() + n / 4, xs.end());
    const double q1 = xs[n / 4];
    std::nth_element(xs.begin(), xs.begin() + 3 * n / 4, xs.end());
    const double q3 = xs[3 * n / 4];
    const double e1 = std::abs(q1 - (cp.x0 - cp.gamma)) / cp.gamma;
    const double e3 = std::abs(q3 - (cp.x0 + cp.gamma)) / cp.gamma;

    const bool ok = exact == total && std::abs(var - 2.0) <= 0.1 && e1 <= 0.02 && e3 <= 0.02;
    return {ok, std::to_string(exact) + "/" + std::to_string(total) + " exact tan(V), var=" + fmt(var) +
                    ", quartile errors " + fmt(e1 * 100, 3) + "% / " + fmt(e3 * 100, 3) + "%"};
}

std::vector<RunRecord> ilshade_runs(const std::string& problem, std::size_t dim, std::uint64_t budget,
                                    std::size_t runs, double pj = 0.2)
{
    const auto obj = bench::make_problem(problem, dim).objective();
    return parallel<RunRecord>(runs, [&](std::size_t k) {
        RunConfig cfg;
        cfg.nfe_max = budget;
        cfg.jumping_rate = pj;
        cfg.seed = k + 1;
        return run_ilshade_rsp(cfg, obj);
    });
}

Verdict optimization_sanity()
{
    const auto sphere = fevs(ilshade_runs("sphere", 10, 100000, 51));
    const auto solved = std::count_if(sphere.begin(), sphere.end(), [](double f) { return f <= 1e-8; });
    const double ras10 = median(fevs(ilshade_runs("rastrigin", 10, 100000, 51)));
    const double ras30 = median(fevs(ilshade_runs("rastrigin", 30, 300000, 51)));

    const auto obj30 = bench::make_problem("rastrigin", 30).objective();
    const auto de = parallel<RunRecord>(51, [&](std::size_t k) {
        RunConfig cfg;
        cfg.np_init = 100;
        cfg.nfe_max = 300000;
        cfg.seed = k + 1;
        return run_classic_de(cfg, obj30);
    });
    const double de30 = median(fevs(de));

    const bool ok = solved >= 48 && ras10 <= 2.0 && ras30 <= de30;
    return {ok, "sphere " + std::to_string(solved) + "/51 solved, rastrigin-10 median " + fmt(ras10) +
                    ", rastrigin-30 median " + fmt(ras30) + " vs classic DE " + fmt(de30)};
}

Verdict jumping_rate_plateau()
{
    // The unshifted function is solved outright at every rate, so use the
    // shifted-rotated variant where the medians actually differ.
    const std::string prob = "shifted-rotated-rastrigin";
    const double m05 = median(fevs(ilshade_runs(prob, 10, 100000, 31, 0.05)));
    const double m20 = median(fevs(ilshade_runs(prob, 10, 100000, 31, 0.2)));
    const double m50 = median(fevs(ilshade_runs(prob, 10, 100000, 31, 0.5)));
    const double best = std::min({m05, m20, m50});
    return {m20 <= 1.5 * best, prob + " medians p_j=0.05: " + fmt(m05) + ", 0.2: " + fmt(m20) + ", 0.5: " + fmt(m50)};
}

Verdict invariant_suites()
{
    std::size_t passed = 0;
    std::string failed;
    const auto& ps = props::all_properties();
    for (const auto& p : ps) {
        const auto o = p.run(props::kDefaultCases);
        if (o.passed() && o.cases >= 1000) {
            ++passed;
        } else {
            failed += " [" + o.name + ": " + o.first_failure + "]";
        }
    }
    return {passed == ps.size(),
            std::to_string(passed) + "/" + std::to_string(ps.size()) + " properties at " +
                std::to_string(props::kDefaultCases) + " cases" + failed};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, Verdict (*)()>> criteria{
        {"friedman reproduction", friedman_reproduction},
        {"hochberg spot checks", hochberg_spot_checks},
        {"lshade-rsp equivalence", lshade_rsp_equivalence},
        {"one-generation oracle", one_generation_oracle},
        {"schedule exactness", schedule_exactness},
        {"sampler statistics", sampler_statistics},
        {"optimization sanity", optimization_sanity},
        {"jumping-rate plateau", jumping_rate_plateau},
        {"invariant suites", invariant_suites},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !v.pass;
        std::printf("%s %zu %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
