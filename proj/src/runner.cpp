#include "gwphase/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "gwphase/bornopp.hpp"
#include "gwphase/dynamics.hpp"
#include "gwphase/scenarios.hpp"

namespace gwphase::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!known.count(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
}

// Reads typed scenario parameters and remembers which keys were consumed.
class Params {
public:
    explicit Params(const json& j) : j_(j) {
        if (!j_.is_object())
            throw ConfigError("params: must be an object");
    }

    double real(const std::string& key, double def) {
        const json* v = find(key);
        if (!v)
            return def;
        if (!v->is_number())
            throw ConfigError("params." + key + ": expected a number");
        const double x = v->get<double>();
        if (!std::isfinite(x))
            throw ConfigError("params." + key + ": must be finite");
        return x;
    }

    double positive(const std::string& key, double def) {
        const double x = real(key, def);
        if (!(x > 0.0))
            throw ConfigError("params." + key + ": must be positive");
        return x;
    }

    long integer(const std::string& key, long def) {
        const json* v = find(key);
        if (!v)
            return def;
        if (!v->is_number_integer())
            throw ConfigError("params." + key + ": expected an integer");
        return v->get<long>();
    }

    cplx complex(const std::string& key, cplx def) {
        const json* v = find(key);
        return v ? to_complex(*v, key) : def;
    }

    std::string text(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) {
        const json* v = find(key);
        if (!v)
            return def;
        if (!v->is_string())
            throw ConfigError("params." + key + ": expected a string");
        const auto s = v->get<std::string>();
        if (std::find(allowed.begin(), allowed.end(), s) == allowed.end())
            throw ConfigError("params." + key + ": unsupported value '" + s + "'");
        return s;
    }

    std::vector<double> reals(const std::string& key, const std::vector<double>& def) {
        const json* v = find(key);
        if (!v)
            return def;
        if (!v->is_array() || v->empty())
            throw ConfigError("params." + key + ": expected a non-empty array of numbers");
        std::vector<double> out;
        for (const auto& x : *v) {
            if (!x.is_number() || !std::isfinite(x.get<double>()))
                throw ConfigError("params." + key + ": expected finite numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    std::vector<long> integers(const std::string& key, const std::vector<long>& def) {
        const json* v = find(key);
        if (!v)
            return def;
        if (!v->is_array() || v->empty())
            throw ConfigError("params." + key + ": expected a non-empty array of integers");
        std::vector<long> out;
        for (const auto& x : *v) {
            if (!x.is_number_integer())
                throw ConfigError("params." + key + ": expected integers");
            out.push_back(x.get<long>());
        }
        return out;
    }

    std::vector<cplx> complexes(const std::string& key, const std::vector<cplx>& def) {
        const json* v = find(key);
        if (!v)
            return def;
        if (!v->is_array() || v->empty())
            throw ConfigError("params." + key + ": expected a non-empty array");
        std::vector<cplx> out;
        for (const auto& x : *v)
            out.push_back(to_complex(x, key));
        return out;
    }

    void finish() const {
        for (const auto& [key, _] : j_.items())
            if (!used_.count(key))
                throw ConfigError("params: unknown key '" + key + "'");
    }

private:
    const json* find(const std::string& key) {
        used_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    static cplx to_complex(const json& v, const std::string& key) {
        if (v.is_number())
            return {v.get<double>(), 0.0};
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return {v[0].get<double>(), v[1].get<double>()};
        throw ConfigError("params." + key + ": expected a number or [re, im]");
    }

    const json& j_;
    std::set<std::string> used_;
};

void put(RunRecord& r, const std::string& name, cplx z) {
    r[name + "_re"] = z.real();
    r[name + "_im"] = z.imag();
}

double phase_distance(cplx a, cplx b) {
    return std::hypot(wrap_angle(a.real() - b.real()), a.imag() - b.imag());
}

ComplexCone read_cone(Params& p, double default_period) {
    ComplexCone c;
    c.field = p.complex("b", {1.0, 0.0});
    c.polar = p.complex("theta", {0.5, 0.2});
    c.period = p.positive("period", default_period);
    const long h = p.integer("handedness", 1);
    if (h != 1 && h != -1)
        throw ConfigError("params.handedness: must be +1 or -1");
    c.handedness = static_cast<int>(h);
    if (std::abs(c.field) == 0.0)
        throw ConfigError("params.b: must be nonzero");
    return c;
}

void put_cone(RunRecord& r, const ComplexCone& c) {
    put(r, "b", c.field);
    put(r, "theta", c.polar);
    r["handedness"] = c.handedness;
}

using Scenario = std::function<std::vector<RunRecord>(Params&, const Resolution&, unsigned, bool)>;

std::vector<RunRecord> scenario_cone(Params& p, const Resolution& res, unsigned, bool execute) {
    const auto cone = read_cone(p, 1.0);
    p.finish();
    if (!execute)
        return {};
    const auto branches = track_branches(cone_loop(cone, res.samples));
    const std::size_t upper = cone_upper_index(cone);
    std::vector<RunRecord> out;
    for (const auto& b : branches) {
        const GWPhase phi = phase_line_integral(b);
        const cplx closed = (b.index == upper ? 1.0 : -1.0) * cone_expected_phase(cone);
        RunRecord r;
        r["scenario"] = "cone";
        put_cone(r, cone);
        r["samples"] = res.samples;
        r["branch"] = b.index;
        put(r, "eigenvalue", b.eigenvalues.front());
        put(r, "phi", phi.value);
        r["phi_principal"] = phi.principal();
        r["phi_branch"] = phi.branch();
        put(r, "closed_form", closed);
        r["deviation"] = phase_distance(phi.value, closed);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RunRecord> scenario_stokes(Params& p, const Resolution& res, unsigned threads, bool execute) {
    const auto cone = read_cone(p, 1.0);
    p.finish();
    if (!execute)
        return {};
    const std::size_t upper = cone_upper_index(cone);
    const auto branches = track_branches(cone_loop(cone, res.samples));
    const GWPhase line = phase_line_integral(branches[upper]);
    const GWPhase surface = phase_surface_integral(cone_surface(cone, res.grid, res.grid), upper, threads);
    RunRecord r;
    r["scenario"] = "stokes";
    put_cone(r, cone);
    r["samples"] = res.samples;
    r["grid"] = res.grid;
    put(r, "line", line.value);
    put(r, "surface", surface.value);
    r["deviation"] = phase_distance(line.value, surface.value);
    return {r};
}

std::vector<RunRecord> scenario_adiabatic(Params& p, const Resolution& res, unsigned threads, bool execute) {
    const auto cone = read_cone(p, 1.0);
    auto periods = p.reals("periods", {20.0, 80.0, 320.0});
    p.finish();
    for (double t : periods)
        if (!(t > 0.0))
            throw ConfigError("params.periods: must be positive");
    if (!execute)
        return {};
    std::sort(periods.begin(), periods.end());
    const std::size_t upper = cone_upper_index(cone);
    const auto family = [cone, &res](double period) {
        ComplexCone c = cone;
        c.period = period;
        return cone_loop(c, res.samples);
    };
    const auto sweep = adiabatic_sweep(family, periods, upper, static_cast<double>(res.steps), threads);
    std::vector<RunRecord> out;
    for (const auto& pt : sweep) {
        RunRecord r;
        r["scenario"] = "adiabatic";
        put_cone(r, cone);
        r["samples"] = res.samples;
        r["steps_per_time"] = res.steps;
        r["period"] = pt.period;
        r["error"] = pt.error;
        put(r, "extracted", pt.result.extracted_geometric);
        put(r, "predicted", pt.result.predicted.value);
        put(r, "survival", pt.result.survival_amplitude);
        r["gap_ratio"] = pt.report.ratio;
        r["adiabatic"] = pt.report.adiabatic;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RunRecord> scenario_jones(Params& p, const Resolution&, unsigned, bool execute) {
    const double kappa = p.real("kappa", 0.3);
    const double length = p.positive("length", 1.0);
    const double rotation = p.real("rotation_deg", 30.0);
    const double axis = p.real("axis_deg", 0.0);
    const double biref = p.real("birefringence", 0.0);
    const double gap = p.positive("vacuum_length", 1.0);
    const auto sequence = p.text("sequence", "entangled", {"entangled", "reference"});
    p.finish();
    if (!execute)
        return {};

    ComplexMatrix n = ComplexMatrix::Zero(2, 2);
    n(1, 1) = cplx(biref, -kappa);
    const double deg = kPi / 180.0;
    JonesSegment a{rotate_generator(n, axis * deg), length, "A"};
    JonesSegment b{rotate_generator(n, (axis + rotation) * deg), length, "B"};
    const std::vector<JonesSegment> reference{vacuum(gap), a, vacuum(gap), b, vacuum(gap)};
    const std::vector<JonesSegment> entangled{vacuum(gap), a, b, vacuum(gap)};
    const auto& measured = sequence == "entangled" ? entangled : reference;

    const ComplexVector probe = cycle_eigenpolarization(measured);
    const GWPhase phi = sequence_phase_extract(measured, reference, probe);
    RunRecord r;
    r["scenario"] = "jones";
    r["sequence"] = sequence;
    r["kappa"] = kappa;
    r["length"] = length;
    r["birefringence"] = biref;
    r["axis_deg"] = axis;
    r["rotation_deg"] = rotation;
    put(r, "probe_x", probe(0));
    put(r, "probe_y", probe(1));
    put(r, "phi", phi.value);
    r["phi_branch"] = phi.branch();
    return {r};
}

std::vector<RunRecord> scenario_helix(Params& p, const Resolution& res, unsigned, bool execute) {
    const double biref = p.real("birefringence", 1.0);
    const double kappa = p.real("kappa", 0.3);
    const double circular = p.real("circular", 0.2);
    const double length = p.positive("length", 800.0);
    p.finish();
    if (!execute)
        return {};

    ComplexMatrix n(2, 2);
    n << 0.0, -kI * circular, kI * circular, cplx(biref, -kappa);
    const auto loop = helical_fiber_loop(n, length, res.samples);
    const auto branches = track_branches(loop);
    const auto steps = std::max<std::size_t>(res.samples - 1,
                                             static_cast<std::size_t>(std::ceil(res.steps * length)));
    // Only the least damped mode can be followed by exact evolution; the
    // others are swamped by leakage into it.
    std::size_t dominant = 0;
    for (const auto& b : branches)
        if (b.eigenvalues.front().imag() > branches[dominant].eigenvalues.front().imag())
            dominant = b.index;
    std::vector<RunRecord> out;
    for (const auto& b : branches) {
        if (!b.cyclic)
            continue;
        const auto ev = evolve(loop, b.index, steps);
        RunRecord r;
        r["scenario"] = "helix";
        r["birefringence"] = biref;
        r["kappa"] = kappa;
        r["circular"] = circular;
        r["length"] = length;
        r["samples"] = res.samples;
        r["branch"] = b.index;
        r["dominant"] = b.index == dominant;
        put(r, "phi", ev.predicted.value);
        r["phi_branch"] = ev.predicted.branch();
        put(r, "extracted", ev.extracted_geometric);
        r["error"] = std::abs(ev.extracted_geometric - ev.predicted.value);
        out.push_back(std::move(r));
    }
    if (out.empty())
        throw NonCyclic("helix: no eigenmode returns to itself", 0.0);
    return out;
}

PlanarPath winding_circle(long turns, double radius, std::size_t per_turn) {
    PlanarPath path;
    path.closed = true;
    if (turns == 0) {
        // Circle beside the origin: x = 3r + r cos s, y = r sin s.
        for (std::size_t k = 0; k < per_turn; ++k) {
            const double s = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(per_turn);
            const double x = 3.0 * radius + radius * std::cos(s), y = radius * std::sin(s);
            path.vertices.push_back({std::hypot(x, y), std::atan2(y, x)});
        }
        return path;
    }
    const std::size_t total = per_turn * static_cast<std::size_t>(std::labs(turns));
    for (std::size_t k = 0; k < total; ++k) {
        const double s = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(per_turn);
        path.vertices.push_back({radius, turns > 0 ? s : -s});
    }
    return path;
}

std::vector<RunRecord> scenario_ac(Params& p, const Resolution&, unsigned, bool execute) {
    const auto levels = p.complexes("levels", {{1.0, -0.1}, {1.5, -0.6}});
    const cplx coupling = p.complex("coupling", {0.2, 0.0});
    const auto moment = p.complexes("moment", {{1.0, 0.0}, {-1.0, 0.0}});
    const double rho = p.real("charge_density", 0.4);
    const long branch = p.integer("branch", 0);
    const auto windings = p.integers("windings", {-3, -2, -1, 0, 1, 2, 3});
    const double radius = p.positive("radius", 1.0);
    p.finish();
    if (levels.size() != 2 || moment.size() != 2)
        throw ConfigError("params.levels and params.moment: need exactly two entries");
    if (branch < 0 || branch > 1)
        throw ConfigError("params.branch: must be 0 or 1");
    if (!execute)
        return {};

    ACModel model;
    model.internal_hamiltonian = ComplexMatrix(2, 2);
    model.internal_hamiltonian << levels[0], coupling, coupling, levels[1];
    model.moment = ComplexMatrix::Zero(2, 2);
    model.moment(0, 0) = moment[0];
    model.moment(1, 1) = moment[1];
    model.charge_density = rho;
    const cplx mu = effective_moment(model, static_cast<std::size_t>(branch));

    std::vector<RunRecord> out;
    for (long n : windings) {
        const auto path = winding_circle(n, radius, 64);
        const GWPhase phase = ac_geometric_phase(model, path, static_cast<std::size_t>(branch));
        const auto factor = topological_factor(mu, rho, path);
        RunRecord r;
        r["scenario"] = "ac";
        r["charge_density"] = rho;
        r["branch"] = branch;
        r["winding"] = winding_number(path).turns;
        put(r, "mu", mu);
        put(r, "phase", phase.value);
        put(r, "topological", factor.topological);
        r["log_topological_abs"] = std::log(std::abs(factor.topological));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RunRecord> scenario_bo(Params& p, const Resolution& res, unsigned, bool execute) {
    const auto cone = read_cone(p, 2.0 * kPi);
    const double mass = p.positive("mass", 1.0);
    const long levels = p.integer("levels", 8);
    const auto seed = p.integer("gauge_seed", 1);
    p.finish();
    if (levels < 1)
        throw ConfigError("params.levels: must be positive");
    if (seed < 0)
        throw ConfigError("params.gauge_seed: must be non-negative");
    if (!execute)
        return {};

    FastFamily family;
    family.hamiltonian = [cone](double q) { return cone_hamiltonian(cone, 1.0, cone.handedness * q); };
    family.mass = mass;
    const std::size_t upper = cone_upper_index(cone);
    const auto pot = bo_potentials(family, upper, res.grid);
    const cplx loop_a = vector_potential_loop(pot);
    ComplexCone ring = cone;
    ring.period = 2.0 * kPi;
    const GWPhase fast = phase_line_integral(track_branches(cone_loop(ring, res.samples))[upper]);
    const double flux = flux_equivalence(pot, mass, res.grid, static_cast<std::uint32_t>(seed));
    auto spectrum = ring_spectrum(pot, mass, res.grid);

    std::vector<RunRecord> out;
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(levels), spectrum.size());
    for (std::size_t k = 0; k < count; ++k) {
        RunRecord r;
        r["scenario"] = "bo";
        put_cone(r, cone);
        r["mass"] = mass;
        r["grid"] = res.grid;
        r["level"] = k;
        put(r, "omega", spectrum[k]);
        put(r, "loop_a", loop_a);
        put(r, "fast_phase", fast.value);
        r["flux_deviation"] = flux;
        out.push_back(std::move(r));
    }
    return out;
}

struct Entry {
    const char* description;
    Scenario fn;
};

const std::map<std::string, Entry>& registry() {
    static const std::map<std::string, Entry> r{
        {"ac", {"metastable moment around a charged line: effective moment, winding phases and decay factors",
                scenario_ac}},
        {"adiabatic", {"exact evolution around the complex cone for several periods T", scenario_adiabatic}},
        {"bo", {"Born-Oppenheimer ring with a cone fast subsystem: vector potential and complex levels",
                scenario_bo}},
        {"cone", {"complex geometric phase of both complex-cone branches", scenario_cone}},
        {"helix", {"helically twisted dichroic fiber: predicted vs evolved phase", scenario_helix}},
        {"jones", {"dichroic crystal sequence: entangled vs reference mode-following phase", scenario_jones}},
        {"stokes", {"complex-cone line integral vs curvature surface integral", scenario_stokes}},
    };
    return r;
}

const Entry& lookup(const std::string& name) {
    const auto& r = registry();
    const auto it = r.find(name);
    if (it == r.end())
        throw ConfigError("scenario: unknown scenario '" + name + "'");
    return it->second;
}

std::size_t positive_size(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        throw ConfigError(where + ": must be a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
}

std::string csv_cell(const RunRecord& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s)
            q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    if (v.is_null())
        return "";
    return v.dump();
}

}  // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object())
        throw ConfigError("config: top level must be an object");
    reject_unknown(doc, {"scenario", "params", "resolution", "output", "timing"}, "config");

    RunConfig c;
    if (!doc.contains("scenario") || !doc["scenario"].is_string())
        throw ConfigError("config: 'scenario' must be a string");
    c.scenario = doc["scenario"].get<std::string>();
    lookup(c.scenario);

    if (doc.contains("params")) {
        if (!doc["params"].is_object())
            throw ConfigError("params: must be an object");
        c.params = doc["params"];
    }
    if (doc.contains("resolution")) {
        const auto& r = doc["resolution"];
        if (!r.is_object())
            throw ConfigError("resolution: must be an object");
        reject_unknown(r, {"samples", "steps", "grid"}, "resolution");
        if (r.contains("samples"))
            c.resolution.samples = positive_size(r["samples"], "resolution.samples");
        if (r.contains("steps"))
            c.resolution.steps = positive_size(r["steps"], "resolution.steps");
        if (r.contains("grid"))
            c.resolution.grid = positive_size(r["grid"], "resolution.grid");
    }
    if (doc.contains("output")) {
        const auto& o = doc["output"];
        if (!o.is_object())
            throw ConfigError("output: must be an object");
        reject_unknown(o, {"path", "format"}, "output");
        if (o.contains("path")) {
            if (!o["path"].is_string())
                throw ConfigError("output.path: must be a string");
            c.output_path = o["path"].get<std::string>();
        }
        if (o.contains("format")) {
            if (!o["format"].is_string())
                throw ConfigError("output.format: must be a string");
            c.format = o["format"].get<std::string>();
        }
    }
    if (c.format != "csv" && c.format != "json")
        throw ConfigError("output.format: must be 'csv' or 'json'");
    if (doc.contains("timing")) {
        if (!doc["timing"].is_boolean())
            throw ConfigError("timing: must be a boolean");
        c.timing = doc["timing"].get<bool>();
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

void validate(const RunConfig& config) {
    Params p(config.params);
    lookup(config.scenario).fn(p, config.resolution, 1, false);
}

std::vector<std::pair<std::string, std::string>> scenario_catalog() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [name, e] : registry())
        out.emplace_back(name, e.description);
    return out;
}

std::vector<RunRecord> run(const RunConfig& config, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    Params p(config.params);
    auto records = lookup(config.scenario).fn(p, config.resolution, std::max(1u, threads), true);
    if (config.timing) {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (auto& r : records)
            r["wall_time_s"] = wall;
    }
    return records;
}

std::string render(const std::vector<RunRecord>& records, const std::string& format) {
    if (records.empty())
        throw ContractViolation("emit: no records");
    std::ostringstream out;
    if (format == "json") {
        out << "[\n";
        for (std::size_t i = 0; i < records.size(); ++i)
            out << "  " << records[i].dump() << (i + 1 < records.size() ? ",\n" : "\n");
        out << "]\n";
        return out.str();
    }
    if (format != "csv")
        throw ContractViolation("emit: format must be 'csv' or 'json'");

    std::vector<std::string> columns;
    for (const auto& [key, _] : records.front().items())
        columns.push_back(key);
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& r : records) {
        if (r.size() != columns.size())
            throw ContractViolation("emit: records do not share one column set");
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (!r.contains(columns[i]))
                throw ContractViolation("emit: record is missing column '" + columns[i] + "'");
            out << (i ? "," : "") << csv_cell(r[columns[i]]);
        }
        out << "\n";
    }
    return out.str();
}

void emit(const std::vector<RunRecord>& records, const std::string& format, const std::string& path) {
    const std::string text = render(records, format);
    if (path.empty()) {
        std::cout << text << std::flush;
        if (!std::cout)
            throw IoError("cannot write to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open output file '" + path + "'");
    out << text;
    out.close();
    if (!out)
        throw IoError("failed writing output file '" + path + "'");
}

unsigned thread_budget() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("GWPHASE_THREADS");
    if (!env || !*env)
        return hw;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n <= 0)
        throw ConfigError("GWPHASE_THREADS: must be a positive integer");
    return static_cast<unsigned>(std::min<long>(n, hw));
}

nlohmann::ordered_json diagnostic(const std::exception& e) {
    nlohmann::ordered_json d;
    d["status"] = "numerical_failure";
    std::string kind = "numerical";
    if (const auto* x = dynamic_cast<const ExceptionalPoint*>(&e)) {
        kind = "exceptional_point";
        d["overlap"] = x->overlap();
    } else if (const auto* x = dynamic_cast<const NonCyclic*>(&e)) {
        kind = "non_cyclic";
        d["overlap"] = x->overlap();
    } else if (const auto* x = dynamic_cast<const SolverFailure*>(&e)) {
        kind = "solver_failure";
        d["residual"] = x->residual();
    } else if (const auto* x = dynamic_cast<const BlowUp*>(&e)) {
        kind = "blow_up";
        d["time"] = x->time();
    } else if (dynamic_cast<const NearDegeneracy*>(&e)) {
        kind = "near_degeneracy";
    } else if (dynamic_cast<const BranchCollision*>(&e)) {
        kind = "branch_collision";
    }
    d["kind"] = kind;
    d["message"] = e.what();
    return d;
}

}  // namespace gwphase::cli
