#include "vielbein/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vielbein/errors.hpp"
#include "vielbein/jbundle.hpp"
#include "vielbein/kaluza.hpp"

namespace vielbein {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxPoints = 1'000'000;

struct CheckInfo {
    CheckKind kind;
    const char* name;
    double default_tolerance;
};

constexpr CheckInfo kChecks[] = {
    {CheckKind::vacuum, "vacuum", 1e-8},
    {CheckKind::einstein_maxwell, "einstein-maxwell", 1e-7},
    {CheckKind::identities, "identities", 1e-9},
    {CheckKind::reduction, "reduction", 1e-10},
    {CheckKind::appendixA, "appendixA", 1e-9},
    {CheckKind::theta_density, "theta-density", 1e-9},
};

const CheckInfo& info(CheckKind kind) {
    for (const auto& c : kChecks)
        if (c.kind == kind) return c;
    throw std::logic_error("unhandled check kind");
}

bool needs_kaluza(CheckKind k) {
    return k == CheckKind::einstein_maxwell || k == CheckKind::reduction || k == CheckKind::appendixA;
}

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

const json& require(const json& obj, const char* key, const char* where) {
    const auto it = obj.find(key);
    if (it == obj.end()) bad(std::string(where) + ": missing \"" + key + "\"");
    return *it;
}

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
    if (!obj.is_object()) bad(std::string(where) + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end())
            bad(std::string(where) + ": unknown key \"" + key + "\"");
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) bad(where + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(where + " must be finite");
    return d;
}

std::string expression_text(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", number(v, where));
        return buf;
    }
    bad(where + " must be an expression string or a number");
}

ParameterMap parameters(const json& v, const std::string& where) {
    if (!v.is_object()) bad(where + " must be an object of numbers");
    ParameterMap p;
    for (const auto& [key, val] : v.items()) p[key] = number(val, where + "." + key);
    return p;
}

void validate_expressions(const NamedSolution& s) {
    std::vector<Expr> exprs;
    try {
        exprs = s.tetrad_exprs();
        for (auto& e : s.potential_exprs()) exprs.push_back(std::move(e));
    } catch (const ParseError& e) {
        bad("solution expression: " + std::string(e.what()));
    }
    const auto missing = unresolved_parameters(exprs, s.params);
    if (!missing.empty()) bad("solution uses undefined parameter \"" + *missing.begin() + "\"");
}

NamedSolution inline_solution(const json& v) {
    only_keys(v, {"signature", "tetrad", "potential", "k", "params"}, "solution.inline");
    const json& sig = require(v, "signature", "solution.inline");
    if (!sig.is_array() || sig.size() != 2 || !sig[0].is_number_integer() || !sig[1].is_number_integer())
        bad("solution.inline.signature must be [p, q]");
    NamedSolution s;
    s.name = "inline";
    s.signature = {sig[0].get<int>(), sig[1].get<int>()};
    if (s.signature.p < 0 || s.signature.q < 0 || s.dim() < 2 || s.dim() > kMaxDim)
        bad("solution.inline.signature: dimension must be in 2..8");
    const int m = s.dim();
    const json& rows = require(v, "tetrad", "solution.inline");
    if (!rows.is_array() || static_cast<int>(rows.size()) != m) bad("solution.inline.tetrad must have one row per dimension");
    for (int a = 0; a < m; ++a) {
        const json& row = rows[static_cast<std::size_t>(a)];
        if (!row.is_array() || static_cast<int>(row.size()) != m) bad("solution.inline.tetrad rows must have " + std::to_string(m) + " entries");
        for (int i = 0; i < m; ++i)
            s.tetrad.push_back(expression_text(row[static_cast<std::size_t>(i)], "solution.inline.tetrad entry"));
    }
    if (v.contains("potential")) {
        const json& pot = v["potential"];
        if (!pot.is_array() || static_cast<int>(pot.size()) != m) bad("solution.inline.potential must have one entry per dimension");
        for (const auto& p : pot) s.potential.push_back(expression_text(p, "solution.inline.potential entry"));
    }
    if (v.contains("k")) s.coupling_k = number(v["k"], "solution.inline.k");
    if (v.contains("params")) s.params = parameters(v["params"], "solution.inline.params");
    s.box.assign(static_cast<std::size_t>(m), {-1.0, 1.0});
    s.domain_description = "as given";
    return s;
}

NamedSolution solution_from(const json& v) {
    only_keys(v, {"name", "params", "inline"}, "solution");
    if (v.contains("inline")) {
        if (v.contains("name")) bad("solution: give either \"name\" or \"inline\", not both");
        return inline_solution(v["inline"]);
    }
    const json& name = require(v, "name", "solution");
    if (!name.is_string()) bad("solution.name must be a string");
    const ParameterMap p = v.contains("params") ? parameters(v["params"], "solution.params") : ParameterMap{};
    try {
        return solution_by_name(name.get<std::string>(), p);
    } catch (const std::invalid_argument& e) {
        bad(std::string("solution: ") + e.what());
    }
}

std::vector<std::vector<double>> grid_from(const json& v, int m) {
    only_keys(v, {"ranges", "points"}, "grid");
    std::vector<std::vector<double>> pts;
    if (v.contains("points") == v.contains("ranges")) bad("grid: give exactly one of \"ranges\" or \"points\"");
    if (v.contains("points")) {
        const json& list = v["points"];
        if (!list.is_array()) bad("grid.points must be an array");
        for (const auto& p : list) {
            if (!p.is_array() || static_cast<int>(p.size()) != m) bad("grid.points entries must have " + std::to_string(m) + " coordinates");
            std::vector<double> x;
            for (const auto& c : p) x.push_back(number(c, "grid.points coordinate"));
            pts.push_back(std::move(x));
        }
    } else {
        const json& ranges = v["ranges"];
        if (!ranges.is_array() || static_cast<int>(ranges.size()) != m)
            bad("grid.ranges must have one [lo, hi, count] per coordinate");
        std::vector<std::vector<double>> axes;
        std::size_t total = 1;
        for (const auto& r : ranges) {
            if (!r.is_array() || r.size() != 3 || !r[2].is_number_integer()) bad("grid.ranges entries must be [lo, hi, count]");
            const double lo = number(r[0], "grid range bound"), hi = number(r[1], "grid range bound");
            const long long n = r[2].get<long long>();
            if (n < 1) bad("grid.ranges counts must be positive");
            total *= static_cast<std::size_t>(n);
            if (total > kMaxPoints) bad("grid has more than " + std::to_string(kMaxPoints) + " points");
            std::vector<double> axis;
            for (long long k = 0; k < n; ++k) axis.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
            axes.push_back(std::move(axis));
        }
        // Last coordinate varies fastest.
        std::vector<std::size_t> idx(axes.size(), 0);
        for (std::size_t n = 0; n < total; ++n) {
            std::vector<double> x;
            for (std::size_t a = 0; a < axes.size(); ++a) x.push_back(axes[a][idx[a]]);
            pts.push_back(std::move(x));
            for (std::size_t a = axes.size(); a-- > 0;) {
                if (++idx[a] < axes[a].size()) break;
                idx[a] = 0;
            }
        }
    }
    if (pts.empty()) bad("grid is empty");
    if (pts.size() > kMaxPoints) bad("grid has more than " + std::to_string(kMaxPoints) + " points");
    return pts;
}

struct Component {
    std::string id;
    double value;
    bool gated;
};

struct CheckOutcome {
    std::vector<Component> components;
    double norm = 0.0;
};

std::string index_label(std::initializer_list<int> idx) {
    std::string s;
    for (int i : idx) s += "[" + std::to_string(i + 1) + "]";
    return s;
}

void add_matrix(std::vector<Component>& out, const std::string& prefix, const RealTensor& t) {
    for (int a = 0; a < t.extent(0); ++a)
        for (int b = 0; b < t.extent(1); ++b) out.push_back({prefix + index_label({a, b}), t(a, b), true});
}

void add_vector(std::vector<Component>& out, const std::string& prefix, const RealTensor& t) {
    for (int a = 0; a < t.extent(0); ++a) out.push_back({prefix + index_label({a}), t(a), true});
}

void add_report(std::vector<Component>& out, const DiscrepancyReport& rep) {
    for (const auto& e : rep.entries) out.push_back({e.name, e.value, true});
}

std::vector<Component> identities_at(const JobConfig& job, const CoframeField& field, std::span<const double> x,
                                     PortableRng& rng) {
    const Signature& sig = field.signature;
    std::vector<Component> out;
    const SectionPoint s = holonomic_section(field, x);
    out.push_back({"torsion", max_abs(torsion_residual(s.cp, s.sp)), true});
    out.push_back({"contact", max_abs(contact_pullback(s)), true});
    out.push_back({"kinematic_block", max_abs(el_residual_A(s)), true});
    out.push_back({"dynamical_vs_density", max_abs_diff(el_residual_B(s), einstein_density(s.cp, curvature(s.sp))), true});
    out.push_back({"omega_vs_christoffel", max_abs_diff(s.sp.omega, omega_from_christoffel(s.cp, coordinate_oracle(field, x))), true});

    const GaugeElement g = centred_gauge(random_gauge_element(sig, rng, CoordinateChange::nonlinear), x);
    const GaugePoint gp = evaluate_gauge(g, x);
    const CoframePoint cpb = gauge_transform_frame(s.cp, gp);
    const SpinConnectionPoint spb = gauge_transform_omega(s.sp, gp, job.omega_gauge_sign);
    out.push_back({"omega_gauge_law", max_abs_diff(detail::omega_from_frame(sig, cpb.e, gauge_transform_E(s.cp, gp)), spb.omega), true});
    const SectionPoint sb{cpb, spb};
    out.push_back({"theta_gauge_invariance", std::fabs(theta_density(sb) * gp.detJ - theta_density(s)), true});
    out.push_back({"omega_domega_identity", omega_domega_identity_check(random_section_point(sig, rng)), true});
    return out;
}

std::vector<Component> theta_at(const CoframeField& field, std::span<const double> x) {
    const SectionPoint s = holonomic_section(field, x);
    const double theta = theta_density(s);
    const CoordinateOracle oracle = coordinate_oracle(field, x);
    return {{"theta", theta, false}, {"theta_vs_scalar_curvature", theta + 0.5 * s.cp.det * oracle.scalar, true}};
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string point_text(std::span<const double> x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + format_double(x[i]);
    return s + ")";
}

struct PointFailure {
    std::exception_ptr error;
    CheckKind kind;
};

}  // namespace

const char* check_name(CheckKind kind) { return info(kind).name; }

CheckKind check_from_name(const std::string& name) {
    for (const auto& c : kChecks)
        if (name == c.name) return c.kind;
    bad("unknown check \"" + name + "\"");
}

JobConfig parse_job(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    only_keys(root, {"version", "check", "solution", "grid", "tolerance", "seed", "threads", "output", "debug"}, "config");
    if (root.contains("version") && root["version"] != kConfigSchemaVersion)
        bad("config.version must be " + std::to_string(kConfigSchemaVersion));

    JobConfig job;
    const json& check = require(root, "check", "config");
    if (check.is_string()) {
        job.checks.push_back(check_from_name(check.get<std::string>()));
    } else if (check.is_array() && !check.empty()) {
        for (const auto& c : check) {
            if (!c.is_string()) bad("config.check entries must be strings");
            const CheckKind k = check_from_name(c.get<std::string>());
            if (std::find(job.checks.begin(), job.checks.end(), k) != job.checks.end()) bad("config.check lists a check twice");
            job.checks.push_back(k);
        }
    } else {
        bad("config.check must be a check name or a nonempty list of them");
    }

    const json& sol = require(root, "solution", "config");
    job.solution = solution_from(sol);
    validate_expressions(job.solution);
    job.solution_echo = sol.dump();
    const int m = job.solution.dim();
    for (CheckKind k : job.checks) {
        if (needs_kaluza(k) && (m != 4 || !job.solution.has_potential()))
            bad(std::string("check \"") + check_name(k) + "\" needs a 4D solution with a potential");
        if ((k == CheckKind::vacuum || k == CheckKind::identities) && m < 3)
            bad(std::string("check \"") + check_name(k) + "\" needs dimension >= 3");
    }

    const json& grid = require(root, "grid", "config");
    job.points = grid_from(grid, m);
    job.grid_echo = grid.dump();

    for (CheckKind k : job.checks) job.tolerances[k] = info(k).default_tolerance;
    if (root.contains("tolerance")) {
        const json& tol = root["tolerance"];
        auto check_positive = [](double t) {
            if (!(t > 0.0)) bad("tolerances must be positive");
            return t;
        };
        if (tol.is_number()) {
            const double t = check_positive(number(tol, "config.tolerance"));
            for (auto& [k, v] : job.tolerances) v = t;
        } else if (tol.is_object()) {
            for (const auto& [name, val] : tol.items()) {
                const CheckKind k = check_from_name(name);
                if (!job.tolerances.count(k)) bad("config.tolerance names check \"" + name + "\" which is not requested");
                job.tolerances[k] = check_positive(number(val, "config.tolerance." + name));
            }
        } else {
            bad("config.tolerance must be a number or an object keyed by check");
        }
    }

    if (root.contains("seed")) {
        const json& s = root["seed"];
        if (!s.is_number_unsigned()) bad("config.seed must be a non-negative integer");
        job.seed = s.get<std::uint64_t>();
    }
    if (root.contains("threads")) {
        const json& t = root["threads"];
        if (!t.is_number_integer() || t.get<long long>() < 1 || t.get<long long>() > 256) bad("config.threads must be an integer in 1..256");
        job.threads = t.get<int>();
    }
    if (root.contains("output")) {
        const json& o = root["output"];
        only_keys(o, {"dir", "report", "csv"}, "config.output");
        auto text = [&](const char* key) {
            if (!o[key].is_string() || o[key].get<std::string>().empty()) bad(std::string("config.output.") + key + " must be a nonempty string");
            return o[key].get<std::string>();
        };
        if (o.contains("dir")) job.out_dir = text("dir");
        if (o.contains("report")) job.report_name = text("report");
        if (o.contains("csv")) {
            job.csv_name = text("csv");
            job.write_csv = true;
        }
    }
    if (root.contains("debug")) {
        const json& d = root["debug"];
        only_keys(d, {"corrupt_omega_gauge_sign"}, "config.debug");
        if (d.contains("corrupt_omega_gauge_sign")) {
            if (!d["corrupt_omega_gauge_sign"].is_boolean()) bad("config.debug.corrupt_omega_gauge_sign must be a boolean");
            if (d["corrupt_omega_gauge_sign"].get<bool>()) job.omega_gauge_sign = -1.0;
        }
    }
    return job;
}

JobResult run_job(const JobConfig& job) {
    const std::size_t n = job.points.size();
    const CoframeField field = job.solution.coframe();
    const bool any_kaluza = std::any_of(job.checks.begin(), job.checks.end(), needs_kaluza);
    const std::optional<KaluzaConfig> kcfg = any_kaluza ? std::optional(kaluza_config(job.solution)) : std::nullopt;

    std::vector<std::vector<CheckOutcome>> results(n);
    std::vector<std::optional<PointFailure>> failures(n);

    auto evaluate = [&](std::size_t index) {
        const std::vector<double>& x = job.points[index];
        PortableRng rng(point_seed(job.seed, index));
        std::optional<KaluzaPoint> kp, shifted;
        std::vector<CheckOutcome> row;
        for (CheckKind kind : job.checks) {
            try {
                if (needs_kaluza(kind) && !kp) kp = evaluate_kaluza(*kcfg, x);
                CheckOutcome out;
                switch (kind) {
                    case CheckKind::vacuum: {
                        const CoframePoint cp = evaluate_coframe(field, x);
                        add_matrix(out.components, "D", einstein_density(cp, curvature(spin_connection(cp))));
                        break;
                    }
                    case CheckKind::einstein_maxwell:
                        add_matrix(out.components, "EM", einstein_maxwell_residual(*kp));
                        add_vector(out.components, "MX", maxwell_residual(*kp));
                        break;
                    case CheckKind::identities:
                        out.components = identities_at(job, field, x, rng);
                        break;
                    case CheckKind::reduction:
                        if (!shifted) shifted = evaluate_kaluza(*kcfg, x, 1.7);
                        add_report(out.components, reduction_check(*kp, *shifted));
                        break;
                    case CheckKind::appendixA:
                        add_report(out.components, field_equation_chain_check(*kp));
                        break;
                    case CheckKind::theta_density:
                        out.components = theta_at(field, x);
                        break;
                }
                for (const auto& c : out.components)
                    if (c.gated) out.norm = std::max(out.norm, std::isnan(c.value) ? INFINITY : std::fabs(c.value));
                row.push_back(std::move(out));
            } catch (const std::exception&) {
                failures[index] = PointFailure{std::current_exception(), kind};
                return;
            }
        }
        results[index] = std::move(row);
    };

    const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(job.threads, 1)), n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) evaluate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) evaluate(i);
            });
        for (auto& th : pool) th.join();
    }

    // The first failing point in grid order decides the error, whatever the thread timing.
    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i]) continue;
        const std::string where = "point #" + std::to_string(i) + " " + point_text(job.points[i]) + ", check \"" +
                                  check_name(failures[i]->kind) + "\": ";
        try {
            std::rethrow_exception(failures[i]->error);
        } catch (const DegenerateFrameError& e) {
            throw DegenerateFrameError(where + e.what());
        } catch (const std::exception& e) {
            throw EvaluationError(where + e.what());
        }
    }

    json report;
    json prov;
    prov["tool"] = "vielbein";
    prov["version"] = kToolVersion;
    prov["config_version"] = kConfigSchemaVersion;
    prov["seed"] = job.seed;
    prov["solution"] = {{"name", job.solution.name}, {"params", job.solution.params},
                        {"domain", job.solution.domain_description}, {"given", json::parse(job.solution_echo)}};
    prov["grid"] = {{"given", json::parse(job.grid_echo)}, {"points", n}};
    if (job.omega_gauge_sign != 1.0) prov["debug"] = {{"corrupt_omega_gauge_sign", true}};
    report["provenance"] = prov;

    bool all_pass = true;
    json checks = json::object();
    for (std::size_t c = 0; c < job.checks.size(); ++c) {
        const CheckKind kind = job.checks[c];
        const double tol = job.tolerances.at(kind);
        double worst = 0.0, sum = 0.0;
        std::size_t worst_index = 0;
        std::map<std::string, double> comp_max;
        for (std::size_t i = 0; i < n; ++i) {
            const CheckOutcome& o = results[i][c];
            sum += o.norm;
            if (o.norm > worst || i == 0) {
                worst = o.norm;
                worst_index = i;
            }
            for (const auto& comp : o.components) {
                double& slot = comp_max[comp.id];
                slot = std::max(slot, std::fabs(comp.value));
            }
        }
        const bool pass = worst <= tol;
        all_pass = all_pass && pass;
        checks[check_name(kind)] = {{"tolerance", tol},      {"max", worst}, {"mean", sum / static_cast<double>(n)},
                                    {"pass", pass},          {"worst_point", worst_index},
                                    {"component_max", comp_max}};
    }
    report["checks"] = checks;

    json points = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json norms = json::object();
        for (std::size_t c = 0; c < job.checks.size(); ++c) norms[check_name(job.checks[c])] = results[i][c].norm;
        points.push_back({{"index", i}, {"x", job.points[i]}, {"in_domain", job.solution.in_domain(job.points[i])}, {"norms", norms}});
    }
    report["points"] = points;
    report["pass"] = all_pass;

    JobResult result;
    result.pass = all_pass;
    result.report_json = report.dump(2) + "\n";
    if (job.write_csv) {
        std::ostringstream csv;
        const int m = job.solution.dim();
        for (int a = 0; a < m; ++a) csv << "x" << (a + 1) << ",";
        csv << "check_id,component_id,value\n";
        for (std::size_t i = 0; i < n; ++i) {
            std::string coords;
            for (double v : job.points[i]) coords += format_double(v) + ",";
            for (std::size_t c = 0; c < job.checks.size(); ++c)
                for (const auto& comp : results[i][c].components)
                    csv << coords << check_name(job.checks[c]) << "," << comp.id << "," << format_double(comp.value) << "\n";
        }
        result.csv = csv.str();
    }
    return result;
}

std::string solutions_listing() {
    std::ostringstream out;
    for (const auto& s : list_solutions()) {
        out << s.name << "(";
        for (std::size_t i = 0; i < s.parameters.size(); ++i) out << (i ? ", " : "") << s.parameters[i];
        out << ")\n    " << s.description << "\n";
    }
    return out.str();
}

}  // namespace vielbein
