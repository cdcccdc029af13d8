#include "ilshade/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

namespace ilshade::experiment {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto end = s.find(sep, start);
        out.push_back(s.substr(start, end == std::string_view::npos ? end : end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

template <typename T>
T parse_integer(std::string_view text, std::string_view what)
{
    text = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw PlanError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

double parse_real_field(std::string_view text, std::string_view what)
{
    try {
        return parse_number(trim(text));
    } catch (const CsvError&) {
        throw PlanError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    }
}

bool valid_identifier(std::string_view s)
{
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
               c == '+' || c == '/';
    });
}

constexpr std::string_view kFilePrefix = "file:";

}  // namespace

// ---------------------------------------------------------------------------

std::vector<IniSection> parse_ini(std::string_view text)
{
    std::vector<IniSection> sections;
    std::size_t number = 0;
    for (std::string_view raw : split(text, '\n')) {
        ++number;
        std::string_view line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw PlanError("line " + std::to_string(number) + ": unterminated section header");
            }
            const std::string_view header = trim(line.substr(1, line.size() - 2));
            IniSection sec;
            const auto space = header.find_first_of(" \t");
            sec.kind = std::string(header.substr(0, space));
            if (space != std::string_view::npos) sec.name = std::string(trim(header.substr(space)));
            sec.line = number;
            if (sec.kind.empty()) {
                throw PlanError("line " + std::to_string(number) + ": empty section header");
            }
            sections.push_back(std::move(sec));
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw PlanError("line " + std::to_string(number) + ": expected 'key = value'");
        }
        if (sections.empty()) {
            throw PlanError("line " + std::to_string(number) + ": entry outside any section");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) {
            throw PlanError("line " + std::to_string(number) + ": empty key");
        }
        sections.back().entries.emplace_back(key, std::string(trim(line.substr(eq + 1))));
    }
    return sections;
}

// ---------------------------------------------------------------------------

std::vector<std::string> algorithm_types() { return {"ilshade-rsp", "lshade-rsp", "classic-de"}; }

AlgorithmType parse_algorithm_type(std::string_view name)
{
    if (name == "ilshade-rsp") return AlgorithmType::IlshadeRsp;
    if (name == "lshade-rsp") return AlgorithmType::LshadeRsp;
    if (name == "classic-de") return AlgorithmType::ClassicDe;
    throw PlanError("unknown algorithm type: " + std::string(name));
}

std::string_view to_string(AlgorithmType type)
{
    switch (type) {
    case AlgorithmType::IlshadeRsp: return "ilshade-rsp";
    case AlgorithmType::LshadeRsp: return "lshade-rsp";
    case AlgorithmType::ClassicDe: return "classic-de";
    }
    return "?";
}

AlgorithmSpec make_algorithm(std::string id, AlgorithmType type)
{
    AlgorithmSpec spec;
    spec.id = std::move(id);
    spec.type = type;
    if (type == AlgorithmType::LshadeRsp) {
        spec.config.jumping_rate = 0.0;
    }
    if (type == AlgorithmType::ClassicDe) {
        spec.config.np_init = 100;
    }
    return spec;
}

void apply_override(AlgorithmSpec& spec, std::string_view key, std::string_view value)
{
    RunConfig& c = spec.config;
    const std::string k(key);
    if (k == "np_init") {
        c.np_init = parse_integer<std::size_t>(value, key);
    } else if (k == "np_fin") {
        c.np_fin = parse_integer<std::size_t>(value, key);
    } else if (k == "jumping_rate") {
        if (spec.type == AlgorithmType::LshadeRsp && parse_real_field(value, key) != 0.0) {
            throw PlanError("lshade-rsp has a fixed jumping rate of 0");
        }
        c.jumping_rate = parse_real_field(value, key);
    } else if (k == "rank_greediness") {
        c.rank_greediness = parse_real_field(value, key);
    } else if (k == "memory_size") {
        c.memory_size = parse_integer<std::size_t>(value, key);
    } else if (k == "archive_factor") {
        c.archive_factor = parse_real_field(value, key);
    } else if (k == "perturbation") {
        const std::string_view v = trim(value);
        if (v == "cauchy") {
            c.perturbation = Perturbation::cauchy(c.perturbation.scale);
        } else if (v.starts_with("stable:")) {
            c.perturbation =
                Perturbation::stable(parse_real_field(v.substr(7), "stable alpha"),
                                     c.perturbation.scale);
        } else {
            throw PlanError("perturbation must be 'cauchy' or 'stable:<alpha>'");
        }
    } else if (k == "perturbation_scale") {
        c.perturbation.scale = parse_real_field(value, key);
    } else if (k == "target_tolerance") {
        c.target_tolerance = parse_real_field(value, key);
    } else if (k == "F") {
        spec.de.F = parse_real_field(value, key);
    } else if (k == "CR") {
        spec.de.CR = parse_real_field(value, key);
    } else if (k == "mutation") {
        try {
            spec.de.mutation = parse_mutation_kind(trim(value));
        } catch (const std::invalid_argument& e) {
            throw PlanError(e.what());
        }
    } else if (k == "crossover") {
        const std::string_view v = trim(value);
        if (v != "bin" && v != "exp") {
            throw PlanError("crossover must be 'bin' or 'exp'");
        }
        spec.de.exponential_crossover = v == "exp";
    } else {
        throw PlanError("unknown algorithm option: " + k);
    }
}

RunRecord run_algorithm(const AlgorithmSpec& spec, const ObjectiveFunction& obj,
                        std::uint64_t seed, std::uint64_t budget, std::size_t trace_points)
{
    RunConfig cfg = spec.config;
    cfg.seed = seed;
    cfg.nfe_max = budget;
    cfg.trace_points = trace_points;
    RunRecord rec = spec.type == AlgorithmType::ClassicDe ? run_classic_de(cfg, obj, spec.de)
                                                          : run_ilshade_rsp(cfg, obj);
    rec.algorithm = spec.id;
    return rec;
}

// ---------------------------------------------------------------------------

std::vector<std::uint64_t> parse_seed_list(std::string_view text)
{
    std::vector<std::uint64_t> seeds;
    for (std::string_view part : split(text, ',')) {
        part = trim(part);
        if (part.empty()) continue;
        const auto dash = part.find('-');
        if (dash == std::string_view::npos) {
            seeds.push_back(parse_integer<std::uint64_t>(part, "seed"));
            continue;
        }
        const auto lo = parse_integer<std::uint64_t>(part.substr(0, dash), "seed");
        const auto hi = parse_integer<std::uint64_t>(part.substr(dash + 1), "seed");
        if (hi < lo) {
            throw PlanError("descending seed range: " + std::string(part));
        }
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    return seeds;
}

void ExperimentPlan::validate() const
{
    if (algorithms.empty()) throw PlanError("plan has no algorithms");
    if (problems.empty()) throw PlanError("plan has no problems");
    if (seeds.empty()) throw PlanError("plan has no seeds");
    if (trace_points == 0) throw PlanError("trace_points must be positive");

    std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
    if (distinct.size() != seeds.size()) throw PlanError("seeds must be distinct");

    std::set<std::string> ids;
    for (const auto& a : algorithms) {
        if (!valid_identifier(a.id)) throw PlanError("invalid algorithm id: '" + a.id + "'");
        if (!ids.insert(a.id).second) throw PlanError("duplicate algorithm id: " + a.id);
    }
    if (budget && *budget == 0) throw PlanError("budget must be positive");

    for (const auto& ref : problems) {
        const auto dims = problem_dimensions(*this, ref);
        if (dims.empty()) throw PlanError("no dimensions given for problem " + ref);
        for (std::size_t d : dims) {
            const ProblemInstance inst = resolve_problem(ref, d);
            if (!valid_identifier(inst.spec.name)) {
                throw PlanError("problem name not usable in CSV output: '" + inst.spec.name + "'");
            }
            const std::uint64_t b = budget.value_or(default_budget(d));
            for (const auto& a : algorithms) {
                RunConfig cfg = a.config;
                cfg.nfe_max = b;
                cfg.trace_points = trace_points;
                try {
                    (void)cfg.resolved(d);
                } catch (const std::invalid_argument& e) {
                    throw PlanError(a.id + " on " + ref + " (D=" + std::to_string(d) +
                                    "): " + e.what());
                }
            }
        }
    }
}

ExperimentPlan parse_plan(std::string_view text, const std::filesystem::path& base_dir)
{
    ExperimentPlan plan;
    bool saw_experiment = false;
    for (const IniSection& sec : parse_ini(text)) {
        if (sec.kind == "experiment") {
            saw_experiment = true;
            for (const auto& [key, value] : sec.entries) {
                if (key == "output") {
                    plan.output_dir = value;
                } else if (key == "problems") {
                    for (auto p : split(value, ',')) {
                        std::string ref(trim(p));
                        if (ref.empty()) continue;
                        if (ref.starts_with(kFilePrefix)) {
                            std::filesystem::path path(ref.substr(kFilePrefix.size()));
                            if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
                            ref = std::string(kFilePrefix) + path.string();
                        }
                        plan.problems.push_back(std::move(ref));
                    }
                } else if (key == "dimensions") {
                    for (auto d : split(value, ',')) {
                        if (!trim(d).empty())
                            plan.dimensions.push_back(parse_integer<std::size_t>(d, "dimension"));
                    }
                } else if (key == "seeds") {
                    plan.seeds = parse_seed_list(value);
                } else if (key == "budget") {
                    plan.budget = parse_integer<std::uint64_t>(value, "budget");
                } else if (key == "trace_points") {
                    plan.trace_points = parse_integer<std::size_t>(value, "trace_points");
                } else if (key == "threads") {
                    plan.threads = parse_integer<std::size_t>(value, "threads");
                } else {
                    throw PlanError("line " + std::to_string(sec.line) +
                                    ": unknown experiment key '" + key + "'");
                }
            }
        } else if (sec.kind == "algorithm") {
            if (sec.name.empty()) {
                throw PlanError("line " + std::to_string(sec.line) + ": algorithm section needs a name");
            }
            std::string type = sec.name;
            for (const auto& [key, value] : sec.entries) {
                if (key == "type") type = value;
            }
            AlgorithmSpec spec = make_algorithm(sec.name, parse_algorithm_type(type));
            for (const auto& [key, value] : sec.entries) {
                if (key == "type") continue;
                try {
                    apply_override(spec, key, value);
                } catch (const PlanError& e) {
                    throw PlanError("algorithm " + sec.name + ": " + e.what());
                }
            }
            plan.algorithms.push_back(std::move(spec));
        } else {
            throw PlanError("line " + std::to_string(sec.line) + ": unknown section '" + sec.kind +
                            "'");
        }
    }
    if (!saw_experiment) {
        throw PlanError("plan has no [experiment] section");
    }
    if (plan.output_dir.empty()) {
        const char* env = std::getenv(kOutputDirEnv);
        plan.output_dir = env && *env ? std::filesystem::path(env) : std::filesystem::path("results");
    }
    return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path)
{
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw PlanError("cannot open plan file " + path.string());
    }
    std::ostringstream buf;
    buf << file.rdbuf();
    return parse_plan(buf.str(), path.parent_path());
}

ProblemInstance resolve_problem(std::string_view ref, std::size_t dimension)
{
    bench::ProblemSpec spec;
    try {
        if (ref.starts_with(kFilePrefix)) {
            spec = bench::load_problem_data(std::filesystem::path(ref.substr(kFilePrefix.size())));
        } else {
            if (!bench::is_registered(ref)) {
                throw PlanError("unknown problem: " + std::string(ref));
            }
            spec = bench::make_problem(ref, dimension);
        }
    } catch (const bench::ProblemDataError& e) {
        throw PlanError(e.what());
    }
    ObjectiveFunction obj = spec.objective();
    return {std::move(spec), std::move(obj)};
}

std::vector<std::size_t> problem_dimensions(const ExperimentPlan& plan, std::string_view ref)
{
    if (ref.starts_with(kFilePrefix)) {
        try {
            return {bench::load_problem_data(std::filesystem::path(ref.substr(kFilePrefix.size())))
                        .dimension};
        } catch (const bench::ProblemDataError& e) {
            throw PlanError(e.what());
        }
    }
    return plan.dimensions;
}

// ---------------------------------------------------------------------------

std::string format_number(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_number(std::string_view text)
{
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    std::string_view body = text;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || ec != std::errc() || ptr != body.data() + body.size()) {
        throw CsvError("invalid number '" + std::string(text) + "'");
    }
    return value;
}

std::string format_results_csv(const std::vector<ResultRow>& rows)
{
    std::string out(kResultsHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += r.algorithm + ',' + r.problem + ',' + std::to_string(r.dimension) + ',' +
               std::to_string(r.seed) + ',' + std::to_string(r.nfe_used) + ',' +
               format_number(r.best_f) + ',' + format_number(r.fev) + '\n';
    }
    return out;
}

namespace {

std::vector<std::string_view> csv_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

template <typename T>
T csv_integer(std::string_view text, std::size_t line)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw CsvError("line " + std::to_string(line) + ": invalid integer '" + std::string(text) +
                       "'");
    }
    return value;
}

double csv_real(std::string_view text, std::size_t line)
{
    try {
        return parse_number(text);
    } catch (const CsvError& e) {
        throw CsvError("line " + std::to_string(line) + ": " + e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw PlanError("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw PlanError("failed writing " + path.string());
    }
}

}  // namespace

std::vector<ResultRow> parse_results_csv(std::string_view text)
{
    const auto lines = csv_lines(text);
    if (lines.empty() || lines.front() != kResultsHeader) {
        throw CsvError("results CSV must start with header '" + std::string(kResultsHeader) + "'");
    }
    std::vector<ResultRow> rows;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto f = split(lines[n], ',');
        if (f.size() != 7) {
            throw CsvError("line " + std::to_string(n + 1) + ": expected 7 fields");
        }
        ResultRow r;
        r.algorithm = std::string(f[0]);
        r.problem = std::string(f[1]);
        r.dimension = csv_integer<std::size_t>(f[2], n + 1);
        r.seed = csv_integer<std::uint64_t>(f[3], n + 1);
        r.nfe_used = csv_integer<std::uint64_t>(f[4], n + 1);
        r.best_f = csv_real(f[5], n + 1);
        r.fev = csv_real(f[6], n + 1);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> load_results_csv(const std::filesystem::path& path)
{
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw CsvError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << file.rdbuf();
    try {
        return parse_results_csv(buf.str());
    } catch (const CsvError& e) {
        throw CsvError(path.string() + ": " + e.what());
    }
}

std::string format_trace_csv(const TraceTable& table)
{
    std::string out = "nfe";
    for (const auto& c : table.columns) out += ',' + c;
    out += '\n';
    for (std::size_t r = 0; r < table.nfe.size(); ++r) {
        out += std::to_string(table.nfe[r]);
        for (double v : table.values[r]) out += ',' + format_number(v);
        out += '\n';
    }
    return out;
}

TraceTable parse_trace_csv(std::string_view text)
{
    const auto lines = csv_lines(text);
    if (lines.empty()) {
        throw CsvError("empty trace CSV");
    }
    const auto header = split(lines.front(), ',');
    if (header.front() != "nfe") {
        throw CsvError("trace CSV must start with an 'nfe' column");
    }
    TraceTable t;
    for (std::size_t c = 1; c < header.size(); ++c) t.columns.emplace_back(header[c]);
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto f = split(lines[n], ',');
        if (f.size() != header.size()) {
            throw CsvError("line " + std::to_string(n + 1) + ": expected " +
                           std::to_string(header.size()) + " fields");
        }
        t.nfe.push_back(csv_integer<std::uint64_t>(f[0], n + 1));
        std::vector<double> row;
        for (std::size_t c = 1; c < f.size(); ++c) row.push_back(csv_real(f[c], n + 1));
        t.values.push_back(std::move(row));
    }
    return t;
}

double quantile(std::vector<double> sample, double q)
{
    if (sample.empty()) {
        throw std::invalid_argument("quantile: empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const double pos = q * static_cast<double>(sample.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sample.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sample[lo] + frac * (sample[hi] - sample[lo]);
}

TraceTable build_trace_table(const std::vector<std::string>& algorithms,
                             const std::vector<std::vector<const RunRecord*>>& runs)
{
    TraceTable t;
    for (const auto& a : algorithms) {
        t.columns.push_back(a + "_median");
        t.columns.push_back(a + "_q1");
        t.columns.push_back(a + "_q3");
    }
    if (runs.empty() || runs.front().empty()) {
        return t;
    }
    const auto& reference = runs.front().front()->trace;
    for (const auto& group : runs) {
        for (const RunRecord* rec : group) {
            if (rec->trace.size() != reference.size()) {
                throw std::invalid_argument("build_trace_table: runs use different checkpoints");
            }
        }
    }
    for (std::size_t k = 0; k < reference.size(); ++k) {
        t.nfe.push_back(reference[k].nfe);
        std::vector<double> row;
        for (const auto& group : runs) {
            std::vector<double> sample;
            for (const RunRecord* rec : group) sample.push_back(rec->trace[k].best_fev);
            row.push_back(quantile(sample, 0.5));
            row.push_back(quantile(sample, 0.25));
            row.push_back(quantile(sample, 0.75));
        }
        t.values.push_back(std::move(row));
    }
    return t;
}

std::string trace_file_name(std::string_view problem, std::size_t dimension)
{
    std::string name = "trace_";
    for (char c : problem) {
        name += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ? c : '_';
    }
    return name + "_D" + std::to_string(dimension) + ".csv";
}

// ---------------------------------------------------------------------------

ExperimentOutput run_experiment(const ExperimentPlan& plan)
{
    plan.validate();

    std::error_code ec;
    std::filesystem::create_directories(plan.output_dir, ec);
    if (ec || !std::filesystem::is_directory(plan.output_dir)) {
        throw PlanError("cannot create output directory " + plan.output_dir.string());
    }
    ExperimentOutput output;
    output.results_csv = plan.output_dir / "results.csv";
    {
        std::ofstream probe(output.results_csv, std::ios::binary | std::ios::trunc);
        if (!probe) {
            throw PlanError("output directory is not writable: " + plan.output_dir.string());
        }
    }

    struct Cell {
        std::unique_ptr<ProblemInstance> instance;
        std::size_t dimension = 0;
        std::uint64_t budget = 0;
    };
    struct Job {
        std::size_t cell = 0;
        std::size_t algorithm = 0;
        std::uint64_t seed = 0;
    };

    std::vector<Cell> cells;
    std::vector<Job> jobs;
    for (const auto& ref : plan.problems) {
        for (std::size_t d : problem_dimensions(plan, ref)) {
            Cell cell;
            cell.instance = std::make_unique<ProblemInstance>(resolve_problem(ref, d));
            cell.dimension = d;
            cell.budget = plan.budget.value_or(default_budget(d));
            cells.push_back(std::move(cell));
            for (std::size_t a = 0; a < plan.algorithms.size(); ++a) {
                for (std::uint64_t seed : plan.seeds) jobs.push_back({cells.size() - 1, a, seed});
            }
        }
    }

    std::vector<RunRecord> records(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            const Job& job = jobs[j];
            const Cell& cell = cells[job.cell];
            try {
                records[j] = run_algorithm(plan.algorithms[job.algorithm], cell.instance->objective,
                                           job.seed, cell.budget, plan.trace_points);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        }
    };
    std::size_t threads = plan.threads ? plan.threads : std::thread::hardware_concurrency();
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(jobs.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    // Serialized sink: plan order regardless of completion order.
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const RunRecord& rec = records[j];
        output.rows.push_back({rec.algorithm, cells[jobs[j].cell].instance->spec.name,
                               cells[jobs[j].cell].dimension, jobs[j].seed, rec.nfe_used,
                               rec.best_f, rec.fev});
    }
    write_file(output.results_csv, format_results_csv(output.rows));

    std::vector<std::string> ids;
    for (const auto& a : plan.algorithms) ids.push_back(a.id);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::vector<std::vector<const RunRecord*>> groups(plan.algorithms.size());
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            if (jobs[j].cell == c) groups[jobs[j].algorithm].push_back(&records[j]);
        }
        const auto path = plan.output_dir /
                          trace_file_name(cells[c].instance->spec.name, cells[c].dimension);
        write_file(path, format_trace_csv(build_trace_table(ids, groups)));
        output.trace_csvs.push_back(path);
    }
    return output;
}

// ---------------------------------------------------------------------------

ComparisonTable compare(const std::vector<ResultRow>& rows, std::string_view control,
                        double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("compare: alpha must lie in (0, 1)");
    }
    ComparisonTable table;
    table.control = std::string(control);
    table.alpha = alpha;

    using CellKey = std::pair<std::string, std::size_t>;
    std::vector<CellKey> cell_order;
    std::map<CellKey, std::map<std::string, std::vector<double>>> samples;
    for (const auto& r : rows) {
        if (std::find(table.algorithms.begin(), table.algorithms.end(), r.algorithm) ==
            table.algorithms.end()) {
            table.algorithms.push_back(r.algorithm);
        }
        const CellKey key{r.problem, r.dimension};
        if (!samples.contains(key)) cell_order.push_back(key);
        samples[key][r.algorithm].push_back(r.fev);
    }
    const auto ctrl = std::find(table.algorithms.begin(), table.algorithms.end(), control);
    if (ctrl == table.algorithms.end()) {
        throw std::invalid_argument("compare: control algorithm '" + std::string(control) +
                                    "' not found in results");
    }
    if (table.algorithms.size() < 2) {
        throw std::invalid_argument("compare: need at least two algorithms");
    }
    const auto control_index = static_cast<std::size_t>(ctrl - table.algorithms.begin());
    for (const auto& a : table.algorithms) {
        if (a != control) table.challengers.push_back(a);
    }
    table.tallies.resize(table.challengers.size());

    for (const auto& key : cell_order) {
        const auto& by_alg = samples[key];
        for (const auto& a : table.algorithms) {
            if (!by_alg.contains(a)) {
                throw std::invalid_argument("compare: " + a + " has no runs on " + key.first +
                                            " D=" + std::to_string(key.second));
            }
        }
        ComparisonCell cell{key.first, key.second, {}, {}};
        const auto& base = by_alg.at(table.control);
        for (std::size_t c = 0; c < table.challengers.size(); ++c) {
            const auto res = stats::wilcoxon_rank_sum(by_alg.at(table.challengers[c]), base, alpha);
            cell.verdicts.push_back(res.verdict);
            cell.p_values.push_back(res.p_value);
            Tally& t = table.tallies[c];
            if (res.verdict == stats::Verdict::Better) ++t.better;
            else if (res.verdict == stats::Verdict::Worse) ++t.worse;
            else ++t.equal;
        }
        table.cells.push_back(std::move(cell));
    }

    if (cell_order.size() >= 2) {
        std::vector<std::vector<double>> scores;
        for (const auto& key : cell_order) {
            const auto& by_alg = samples[key];
            const std::size_t runs = by_alg.at(table.control).size();
            std::vector<double> row;
            for (const auto& a : table.algorithms) {
                const auto& s = by_alg.at(a);
                if (s.size() != runs) {
                    throw std::invalid_argument("compare: mismatched run counts on " + key.first +
                                                " D=" + std::to_string(key.second));
                }
                double mean = 0.0;
                for (double v : s) mean += v;
                row.push_back(mean / static_cast<double>(s.size()));
            }
            scores.push_back(std::move(row));
        }
        table.friedman = stats::friedman(scores);
        table.post_hoc = stats::friedman_post_hoc(*table.friedman, control_index);
    }
    return table;
}

std::string format_comparison(const ComparisonTable& table)
{
    std::ostringstream out;
    out << "problem,D";
    for (const auto& a : table.challengers) out << ',' << a;
    out << '\n';
    for (const auto& cell : table.cells) {
        out << cell.problem << ',' << cell.dimension;
        for (auto v : cell.verdicts) out << ',' << stats::symbol(v);
        out << '\n';
    }
    out << "+/=/-,";
    for (const auto& t : table.tallies) {
        out << ',' << t.better << '/' << t.equal << '/' << t.worse;
    }
    out << '\n';

    if (table.friedman) {
        const auto& fr = *table.friedman;
        out << "\nalgorithm,average_rank,z,p_value,adjusted_p\n";
        std::size_t row = 0;
        for (std::size_t j = 0; j < table.algorithms.size(); ++j) {
            out << table.algorithms[j] << ',' << format_number(fr.average_ranks[j]);
            if (table.algorithms[j] == table.control) {
                out << ",,,\n";
                continue;
            }
            const auto& ph = table.post_hoc[row++];
            out << ',' << format_number(ph.z) << ',' << format_number(ph.p_value) << ','
                << format_number(ph.adjusted_p) << '\n';
        }
        out << "\nproblems," << fr.problems << "\nchi_square," << format_number(fr.chi_square)
            << "\ndf," << format_number(fr.df) << "\np_value," << format_number(fr.p_value)
            << '\n';
    }
    return out.str();
}

}  // namespace ilshade::experiment
