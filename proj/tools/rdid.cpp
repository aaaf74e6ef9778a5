#include <rdid/acceptance.hpp>
#include <rdid/conditioning.hpp>
#include <rdid/esprit.hpp>
#include <rdid/pde.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace rdid;

namespace {

struct Settings {
    std::string subcommand;
    std::string config;
    std::string out = "out";
    int precision = 32;
    std::uint64_t seed = 20240611;
    std::string delta_min;
    std::string delta_max;
    int delta_steps = 0;
    std::string epsilon;
    std::size_t n1 = 4;
    std::size_t n2 = 1;
    std::string lambdas;  // comma lists; empty means lambda_n = n^2, y_n = 1
    std::string amplitudes;
    std::string p = "0.1";
    std::string q = "0.1";
    std::size_t nx = 60;
    int order = 4;
    std::string horizon = "2";
    std::size_t samples = 1025;
    std::size_t modes = 30;
    std::size_t stride_min = 1;
    std::size_t stride_max = 0;
    std::size_t snapshots = 5;
    unsigned threads = 0;
};

/// Breakdown of a whole run (not of a single sweep point).
struct RunBreakdown : std::runtime_error {
    std::string where;
    RunBreakdown(const std::string& msg, std::string at)
        : std::runtime_error(msg), where(std::move(at))
    {
    }
};

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

std::string canonical(const Settings& s)
{
    std::map<std::string, std::string> kv{
        {"subcommand", s.subcommand},   {"precision", std::to_string(s.precision)},
        {"seed", std::to_string(s.seed)}, {"delta-min", s.delta_min},
        {"delta-max", s.delta_max},     {"delta-steps", std::to_string(s.delta_steps)},
        {"epsilon", s.epsilon},         {"n1", std::to_string(s.n1)},
        {"n2", std::to_string(s.n2)},   {"lambdas", s.lambdas},
        {"amplitudes", s.amplitudes},   {"p", s.p},
        {"q", s.q},                     {"nx", std::to_string(s.nx)},
        {"order", std::to_string(s.order)}, {"horizon", s.horizon},
        {"samples", std::to_string(s.samples)}, {"modes", std::to_string(s.modes)},
        {"stride-min", std::to_string(s.stride_min)},
        {"stride-max", std::to_string(s.stride_max)},
        {"snapshots", std::to_string(s.snapshots)}};
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k + "=" + v + "\n";
    }
    return out;
}

/// CSV cell: significant digits follow the working precision.
template <typename T>
std::string cell(const T& x)
{
    return format_real(x, decimal_digits<T>() == 16 ? 17 : decimal_digits<T>());
}

std::string clean(std::string s)
{
    for (auto& c : s) {
        if (c == ',' || c == '\n' || c == '"') {
            c = ';';
        }
    }
    return s;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::string& digest, const std::string& header)
        : path_(path), os_(path)
    {
        if (!os_) {
            throw std::runtime_error("cannot write " + path.string());
        }
        os_ << "# manifest " << digest << " manifest.json\n" << header << "\n";
    }
    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            os_ << (i ? "," : "") << cells[i];
        }
        os_ << "\n";
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
    std::ofstream os_;
};

/// Evaluates fn(i) for i in [0, count) on a pool of workers; results keep index order.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t count, unsigned threads, Fn fn)
{
    std::vector<std::optional<R>> slots(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) {
            throw InvalidInput(std::string("empty entry in ") + what);
        }
        out.push_back(from_decimal<T>(item.substr(b, e - b + 1)));
    }
    return out;
}

template <typename T>
T parse_real(const std::string& text, const char* what)
{
    try {
        return from_decimal<T>(text);
    } catch (const std::exception&) {
        throw InvalidInput(std::string("cannot parse ") + what + " '" + text + "'");
    }
}

template <typename T>
ExponentialModel<T> build_model(const Settings& s)
{
    const T eps = parse_real<T>(s.epsilon, "epsilon");
    if (s.lambdas.empty()) {
        auto m = ExponentialModel<T>::squares(s.n1, s.n2, eps);
        m.validate();
        return m;
    }
    const auto lam = parse_list<T>(s.lambdas, "lambdas");
    auto amp = s.amplitudes.empty() ? std::vector<T>(lam.size(), T(1))
                                    : parse_list<T>(s.amplitudes, "amplitudes");
    if (lam.size() != s.n1 + s.n2 || amp.size() != lam.size()) {
        throw InvalidInput("lambdas and amplitudes need N1+N2 = " + std::to_string(s.n1 + s.n2) +
                           " entries");
    }
    ExponentialModel<T> m;
    m.main_lambda.assign(lam.begin(), lam.begin() + static_cast<long>(s.n1));
    m.main_y.assign(amp.begin(), amp.begin() + static_cast<long>(s.n1));
    m.tail_lambda.assign(lam.begin() + static_cast<long>(s.n1), lam.end());
    m.tail_y.assign(amp.begin() + static_cast<long>(s.n1), amp.end());
    m.epsilon = eps;
    m.validate();
    return m;
}

template <typename T>
std::vector<T> delta_grid(const Settings& s)
{
    const T lo = parse_real<T>(s.delta_min, "delta-min");
    const T hi = parse_real<T>(s.delta_max, "delta-max");
    if (!(lo > T(0)) || hi < lo) {
        throw InvalidInput("need 0 < delta-min <= delta-max");
    }
    if (s.delta_steps < 1) {
        throw InvalidInput("delta-steps must be at least 1");
    }
    std::vector<T> d;
    for (int i = 0; i <= s.delta_steps; ++i) {
        d.push_back(lo + (hi - lo) * T(i) / T(s.delta_steps));
    }
    return d;
}

struct Artifacts {
    std::vector<std::string> files;
    std::vector<std::string> notes;
    nlohmann::json extra = nlohmann::json::object();
};

template <typename T>
void run_condition(const Settings& s, const std::string& digest, Artifacts& art)
{
    const auto model = build_model<T>(s);
    const auto deltas = delta_grid<T>(s);
    const auto points = parallel_map<ConditionSweepPoint<T>>(
        deltas.size(), s.threads, [&](std::size_t i) { return condition_point(model, deltas[i]); });
    CsvWriter csv(fs::path(s.out) / "condition.csv", digest,
                  "delta[time],n,route,K_y[dimensionless],K_lambda[1/time],reliable,status");
    for (const auto& pt : points) {
        for (const auto* rep : {pt.linear ? &*pt.linear : nullptr, pt.closed ? &*pt.closed : nullptr}) {
            if (rep == nullptr) {
                continue;
            }
            for (std::size_t n = 0; n < rep->k_y.size(); ++n) {
                csv.row({cell(pt.delta), std::to_string(n + 1), route_name(rep->route),
                         cell(rep->k_y[n]), cell(rep->k_lambda[n]), pt.reliable ? "1" : "0", "ok"});
            }
        }
        if (!pt.failure.empty()) {
            const char* which = !pt.linear ? "linear-solve" : !pt.closed ? "closed-form" : "";
            art.notes.push_back(std::string(which) + " route breakdown at delta=" + cell(pt.delta) +
                                ": " + pt.failure);
            if (!pt.linear && !pt.closed) {
                csv.row({cell(pt.delta), "", "", "", "", "0", clean(pt.failure)});
            }
        }
    }
    art.files.push_back(csv.path().string());
}

template <typename T>
void run_esprit(const Settings& s, const std::string& digest, Artifacts& art)
{
    const auto model = build_model<T>(s);
    if (model.epsilon == T(0)) {
        throw InvalidInput("esprit sweep reports errors divided by eps; eps must be positive");
    }
    const auto deltas = delta_grid<T>(s);
    struct Row {
        T delta;
        std::optional<ConditionReport<T>> kappa;
        std::optional<std::pair<Vector<T>, Vector<T>>> err;
        std::vector<bool> reliable;
        std::string status = "ok";
    };
    const std::size_t n1 = model.n1();
    const auto rows = parallel_map<Row>(deltas.size(), s.threads, [&](std::size_t i) {
        Row r;
        r.delta = deltas[i];
        r.reliable.assign(n1, false);
        try {
            r.kappa = condition_linear_solve(model, r.delta);
            r.reliable = esprit_reliability(model, r.delta, *r.kappa);
        } catch (const NumericalBreakdown& e) {
            r.status = std::string("condition: ") + e.what();
        }
        try {
            const auto samples = synthesize(model, SampleGrid<T>::minimal(r.delta, n1)).total;
            const auto fit = match_fit(esprit_fit(samples, FitConfig<T>{n1, r.delta}), model.main_lambda);
            r.err = rescaled_errors(fit.lambda, fit.y, model.main_lambda, model.main_y, model.epsilon);
        } catch (const NumericalBreakdown& e) {
            r.status = e.what();
        }
        return r;
    });
    CsvWriter csv(fs::path(s.out) / "esprit.csv", digest,
                  "delta[time],n,E_lambda[1/time],E_y[dimensionless],K_lambda[1/time],"
                  "K_y[dimensionless],reliable,status");
    for (const auto& r : rows) {
        if (r.status != "ok") {
            art.notes.push_back("breakdown at delta=" + cell(r.delta) + ": " + r.status);
        }
        for (std::size_t n = 0; n < n1; ++n) {
            using std::abs;
            csv.row({cell(r.delta), std::to_string(n + 1), r.err ? cell(r.err->first[n]) : "",
                     r.err ? cell(r.err->second[n]) : "",
                     r.kappa ? cell(T(abs(r.kappa->k_lambda[n]))) : "",
                     r.kappa ? cell(T(abs(r.kappa->k_y[n]))) : "",
                     r.reliable[n] && r.err ? "1" : "0", clean(r.status)});
        }
    }
    art.files.push_back(csv.path().string());
}

template <typename T>
void run_bounds(const Settings& s, const std::string& digest, Artifacts& art)
{
    const auto model = build_model<T>(s);
    Vector<T> lam = model.main_lambda;
    lam.insert(lam.end(), model.tail_lambda.begin(), model.tail_lambda.end());
    const auto gap = estimate_gap_constants(lam);
    const auto deltas = delta_grid<T>(s);
    const std::size_t n1 = model.n1();
    CsvWriter tab(fs::path(s.out) / "bounds.csv", digest,
                  "delta[time],n,sigma,xi1,xi2,xi3,xi4,theta1,theta2,theta3,Theta,lagrange_sq,"
                  "lagrange_sq_theta,scaled_xi4,max_identity_residual");
    CsvWriter ineq(fs::path(s.out) / "inequalities.csv", digest,
                   "delta[time],n,check,lower,value,upper,holds");
    std::size_t violations = 0;
    for (const auto& d : deltas) {
        for (std::size_t n = 1; n <= n1; ++n) {
            const auto b = bound_diagnostics(lam, n, n1, d);
            T res(0);
            for (const auto& r : b.identity_residual) {
                res = std::max(res, r);
            }
            tab.row({cell(d), std::to_string(n), std::to_string(b.sigma), cell(b.xi1), cell(b.xi2),
                     cell(b.xi3), cell(b.xi4), cell(b.theta1), cell(b.theta2), cell(b.theta3),
                     cell(b.Theta), cell(b.lagrange_sq), cell(b.lagrange_sq_theta),
                     cell(scaled_xi4(b, lam)), cell(res)});
            for (const auto& c : theta_inequalities(b, gap)) {
                violations += !c.holds();
                ineq.row({cell(d), std::to_string(n), c.name, c.lower ? cell(*c.lower) : "",
                          cell(c.value), c.upper ? cell(*c.upper) : "", c.holds() ? "1" : "0"});
            }
        }
    }
    art.extra["gap_lower"] = to_double(gap.lower);
    art.extra["gap_upper"] = to_double(gap.upper);
    art.extra["inequality_violations"] = violations;
    art.files.push_back(tab.path().string());
    art.files.push_back(ineq.path().string());
}

template <typename T>
PipelineConfig<T> pipeline_config(const Settings& s)
{
    PipelineConfig<T> c;
    c.p = parse_real<T>(s.p, "p");
    c.q = parse_real<T>(s.q, "q");
    c.nx = s.nx;
    c.order = s.order;
    c.n1 = s.n1;
    c.n2 = s.n2;
    c.epsilon = parse_real<T>(s.epsilon, "epsilon");
    c.seed = s.seed;
    c.samples = s.samples;
    c.horizon = parse_real<T>(s.horizon, "horizon");
    c.initial_modes = s.modes;
    c.stride_min = s.stride_min;
    c.stride_max = s.stride_max;
    if (c.samples < 2) {
        throw InvalidInput("need at least 2 samples");
    }
    if (c.stride_min == 0) {
        throw InvalidInput("stride-min must be positive");
    }
    return c;
}

template <typename T>
void write_measurements(const fs::path& path, const std::string& digest, const Vector<T>& t,
                        const Vector<T>& y)
{
    CsvWriter csv(path, digest, "t[time],y[measurement units]");
    for (std::size_t k = 0; k < t.size(); ++k) {
        csv.row({cell(t[k]), cell(y[k])});
    }
}

template <typename T>
nlohmann::json filter_json(const MeasurementFilter<T>& f)
{
    nlohmann::json c = nlohmann::json::array();
    for (const auto& v : f.coefficients) {
        c.push_back(cell(v));
    }
    return c;
}

template <typename T>
void run_simulate(const Settings& s, const std::string& digest, Artifacts& art)
{
    const auto cfg = pipeline_config<T>(s);
    const auto setup = prepare_pipeline(cfg);
    for (const auto& w : setup.simulation.warnings) {
        art.notes.push_back("warning: " + w);
    }
    if (s.snapshots < 2) {
        throw InvalidInput("snapshots must be at least 2");
    }
    CsvWriter field(fs::path(s.out) / "field.csv", digest, "t[time],x[length],z[field units]");
    const auto& sim = setup.simulation;
    for (std::size_t j = 0; j < s.snapshots; ++j) {
        const T t = cfg.horizon * T(static_cast<long>(j)) / T(static_cast<long>(s.snapshots - 1));
        const auto z = sim.field(t);
        field.row({cell(t), cell(T(0)), cell(T(0))});
        for (std::size_t i = 0; i < sim.nx; ++i) {
            field.row({cell(t), cell(sim.x(i)), cell(z[i])});
        }
        field.row({cell(t), cell(T(1)), cell(T(0))});
    }
    write_measurements(fs::path(s.out) / "measurements.csv", digest, setup.times, setup.series);
    art.files.push_back(field.path().string());
    art.files.push_back((fs::path(s.out) / "measurements.csv").string());
    art.extra["filter_coefficients"] = filter_json(setup.filter);
    art.extra["stencil_order"] = sim.order;
}

template <typename T>
void run_pipeline(const Settings& s, const std::string& digest, Artifacts& art)
{
    const auto cfg = pipeline_config<T>(s);
    const auto setup = prepare_pipeline(cfg);
    for (const auto& w : setup.simulation.warnings) {
        art.notes.push_back("warning: " + w);
    }
    if (cfg.stride_min > setup.stride_max) {
        throw InvalidInput("stride-min exceeds the largest admissible stride " +
                           std::to_string(setup.stride_max));
    }
    const std::size_t count = setup.stride_max - cfg.stride_min + 1;
    const auto points = parallel_map<PipelinePoint<T>>(count, s.threads, [&](std::size_t i) {
        return pipeline_point(cfg, setup, cfg.stride_min + i);
    });
    write_measurements(fs::path(s.out) / "measurements.csv", digest, setup.times, setup.series);
    CsvWriter lam(fs::path(s.out) / "pipeline_lambda.csv", digest,
                  "stride,delta[time],n,lambda_est[1/time],lambda_true[1/time],"
                  "rel_err_lambda[dimensionless],y_est,z0_est,z0_true,status");
    CsvWriter pq(fs::path(s.out) / "pipeline_pq.csv", digest,
                 "stride,delta[time],p_hat[length^2/time],q_hat[1/time],rel_err_p[dimensionless],"
                 "rel_err_q[dimensionless],status");
    std::size_t ok = 0;
    for (const auto& pt : points) {
        const std::string st = std::to_string(pt.stride);
        if (!pt.ok) {
            art.notes.push_back("breakdown at delta=" + cell(pt.delta) + ": " + pt.failure);
            lam.row({st, cell(pt.delta), "", "", "", "", "", "", "", clean(pt.failure)});
            pq.row({st, cell(pt.delta), "", "", "", "", clean(pt.failure)});
            continue;
        }
        ++ok;
        for (std::size_t n = 0; n < cfg.n1; ++n) {
            lam.row({st, cell(pt.delta), std::to_string(n + 1), cell(pt.lambda[n]),
                     cell(setup.true_lambda[n]), cell(pt.rel_lambda[n]), cell(pt.y[n]),
                     cell(pt.z0[n]), cell(setup.true_z0[n]), "ok"});
        }
        pq.row({st, cell(pt.delta), cell(pt.p_hat), cell(pt.q_hat), cell(pt.rel_p), cell(pt.rel_q),
                "ok"});
    }
    art.files.push_back((fs::path(s.out) / "measurements.csv").string());
    art.files.push_back(lam.path().string());
    art.files.push_back(pq.path().string());
    art.extra["filter_coefficients"] = filter_json(setup.filter);
    art.extra["stencil_order"] = setup.simulation.order;
    art.extra["strides_fitted"] = ok;
    if (ok == 0) {
        throw RunBreakdown("no stride produced a fit", cell(points.front().delta));
    }
}

std::string utc_now()
{
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void apply_defaults(Settings& s, const CLI::App& app)
{
    struct D {
        const char* lo;
        const char* hi;
        int steps;
        const char* eps;
        std::size_t n2;
    };
    static const std::map<std::string, D> defaults{
        {"condition", {"0.5", "6", 44, "0", 1}},
        {"esprit", {"0.25", "2.5", 18, "0.1", 1}},
        {"bounds", {"0.5", "4", 7, "0", 1}},
        {"simulate", {"0.5", "0.5", 1, "1e-4", 2}},
        {"pipeline", {"0.5", "0.5", 1, "1e-4", 2}},
        {"verify", {"0.5", "0.5", 1, "0", 1}}};
    const auto& d = defaults.at(s.subcommand);
    if (app.count("--delta-min") == 0) {
        s.delta_min = d.lo;
    }
    if (app.count("--delta-max") == 0) {
        s.delta_max = d.hi;
    }
    if (app.count("--delta-steps") == 0) {
        s.delta_steps = d.steps;
    }
    if (app.count("--epsilon") == 0) {
        s.epsilon = d.eps;
    }
    if (app.count("--n2") == 0) {
        s.n2 = d.n2;
    }
    if (s.threads == 0) {
        s.threads = std::max(1u, std::thread::hardware_concurrency());
    }
}

int run(Settings& s)
{
    if (s.subcommand == "verify") {
        const auto results = run_acceptance(std::cout);
        std::size_t passed = 0;
        for (const auto& r : results) {
            passed += r.passed;
        }
        std::cout << passed << "/" << results.size() << " criteria passed\n";
        return passed == results.size() ? 0 : 3;
    }
    fs::create_directories(s.out);
    const std::string params = canonical(s);
    const std::string digest = hex(fnv1a(params));
    Artifacts art;
    const auto started = utc_now();
    dispatch_precision(s.precision, [&](auto tag) {
        using T = typename decltype(tag)::type;
        if (s.subcommand == "condition") {
            run_condition<T>(s, digest, art);
        } else if (s.subcommand == "esprit") {
            run_esprit<T>(s, digest, art);
        } else if (s.subcommand == "bounds") {
            run_bounds<T>(s, digest, art);
        } else if (s.subcommand == "simulate") {
            run_simulate<T>(s, digest, art);
        } else if (s.subcommand == "pipeline") {
            run_pipeline<T>(s, digest, art);
        }
    });
    nlohmann::json m;
    m["subcommand"] = s.subcommand;
    m["config_file"] = s.config;
    m["config_digest"] = digest;
    m["parameters"] = params;
    m["seed"] = s.seed;
    m["precision"] = s.precision;
    m["outputs"] = art.files;
    m["notes"] = art.notes;
    m["started"] = started;
    m["finished"] = utc_now();
    for (auto it = art.extra.begin(); it != art.extra.end(); ++it) {
        m[it.key()] = it.value();
    }
    std::ofstream(fs::path(s.out) / "manifest.json") << m.dump(2) << "\n";
    for (const auto& n : art.notes) {
        std::cerr << n << "\n";
    }
    for (const auto& f : art.files) {
        std::cout << f << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Condition numbers, ESPRIT fits and PDE identification experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    Settings s;
    auto* config_opt = app.set_config("--config", "", "key = value configuration file");
    app.add_option("--precision", s.precision, "decimal digits: 16, 32 or 100")
        ->check(CLI::IsMember({16, 32, 100}));
    app.add_option("--seed", s.seed, "seed for the filter coefficients");
    app.add_option("--out", s.out, "output directory");
    app.add_option("--delta-min", s.delta_min, "smallest sampling step");
    app.add_option("--delta-max", s.delta_max, "largest sampling step");
    app.add_option("--delta-steps", s.delta_steps, "number of intervals in the step sweep");
    app.add_option("--epsilon", s.epsilon, "tail weight eps");
    app.add_option("--n1", s.n1, "number of main components")->check(CLI::PositiveNumber);
    app.add_option("--n2", s.n2, "number of tail components")->check(CLI::PositiveNumber);
    app.add_option("--lambdas", s.lambdas, "comma list of N1+N2 rates (default n^2)");
    app.add_option("--amplitudes", s.amplitudes, "comma list of N1+N2 amplitudes (default 1)");
    app.add_option("--p", s.p, "diffusion coefficient");
    app.add_option("--q", s.q, "reaction coefficient");
    app.add_option("--nx", s.nx, "interior grid points");
    app.add_option("--order", s.order, "stencil order")->check(CLI::IsMember({2, 4}));
    app.add_option("--horizon", s.horizon, "final time");
    app.add_option("--samples", s.samples, "equispaced measurement times on [0, horizon]");
    app.add_option("--modes", s.modes, "initial-condition modes");
    app.add_option("--stride-min", s.stride_min, "smallest subsampling stride");
    app.add_option("--stride-max", s.stride_max, "largest subsampling stride (0: largest that fits)");
    app.add_option("--snapshots", s.snapshots, "field snapshots written by simulate");
    app.add_option("--threads", s.threads, "worker threads (0: hardware)");

    for (const char* name : {"condition", "esprit", "bounds", "simulate", "pipeline", "verify"}) {
        static const std::map<std::string, std::string> help{
            {"condition", "step sweep of K_y, K_lambda"},
            {"esprit", "step sweep of ESPRIT rescaled errors"},
            {"bounds", "bound diagnostics and inequality checks"},
            {"simulate", "PDE field snapshots and measurement series"},
            {"pipeline", "simulate, measure, subsample, fit, regress (p, q)"},
            {"verify", "run the acceptance suite"}};
        app.add_subcommand(name, help.at(name))->callback([&s, name] { s.subcommand = name; });
    }

    try {
        app.parse(argc, argv);
        if (config_opt->count() > 0) {
            s.config = config_opt->as<std::string>();
        }
        apply_defaults(s, app);
        return run(s);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const RunBreakdown& e) {
        std::cerr << "numerical breakdown at delta=" << e.where << ": " << e.what() << "\n";
        return 2;
    } catch (const NumericalBreakdown& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return 2;
    }
}
