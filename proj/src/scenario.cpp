// scenario.cpp — Scenario parsing and validation

#include "fdd/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fdd/constants.hpp"
#include "fdd/errors.hpp"

namespace fdd::scenario {

namespace {

using io::Json;

void check_keys(const Json& obj, const std::string& block, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ScenarioError(block, "must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw ScenarioError(block.empty() ? key : block + "." + key, "unknown key");
    }
}

std::optional<double> opt_number(const Json& obj, const std::string& block, const std::string& key) {
    const auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_number()) throw ScenarioError(block + "." + key, "must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw ScenarioError(block + "." + key, "must be finite");
    return v;
}

double positive(std::optional<double> v, const std::string& name, bool allow_zero = false) {
    if (!v) throw ScenarioError(name, "required");
    if (allow_zero ? *v < 0.0 : *v <= 0.0)
        throw ScenarioError(name, allow_zero ? "must be >= 0" : "must be > 0");
    return *v;
}

std::optional<long long> opt_integer(const Json& obj, const std::string& block, const std::string& key) {
    const auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_number_integer()) throw ScenarioError(block + "." + key, "must be an integer");
    return it->get<long long>();
}

Eigen::Vector3d vector3(const Json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 3) throw ScenarioError(name, "must be an array of three numbers");
    Eigen::Vector3d v;
    for (int k = 0; k < 3; ++k) {
        if (!j[k].is_number()) throw ScenarioError(name, "must be an array of three numbers");
        v[k] = j[k].get<double>();
    }
    if (!v.allFinite()) throw ScenarioError(name, "must be finite");
    return v;
}

DriveBlock parse_drive(const Json& d) {
    check_keys(d, "drive", {"frequency_convention", "omega", "rabi", "omega_eg", "detuning"});
    DriveBlock b;
    const auto conv = d.find("frequency_convention");
    if (conv == d.end()) throw ScenarioError("drive.frequency_convention", "required (\"angular\" or \"ordinary\")");
    if (!conv->is_string()) throw ScenarioError("drive.frequency_convention", "must be a string");
    const auto name = conv->get<std::string>();
    if (name == "angular")
        b.convention = FrequencyConvention::angular;
    else if (name == "ordinary")
        b.convention = FrequencyConvention::ordinary;
    else
        throw ScenarioError("drive.frequency_convention", "must be \"angular\" or \"ordinary\"");
    const double scale = b.convention == FrequencyConvention::ordinary ? 2.0 * constants::pi : 1.0;
    auto scaled = [&](const char* key) {
        auto v = opt_number(d, "drive", key);
        if (v) *v *= scale;
        return v;
    };
    b.omega = scaled("omega");
    b.rabi = scaled("rabi");
    b.omega_eg = scaled("omega_eg");
    b.detuning = scaled("detuning");
    if (b.omega_eg && b.detuning) throw ScenarioError("drive.detuning", "give exactly one of omega_eg and detuning");
    if (b.omega) positive(b.omega, "drive.omega");
    if (b.rabi) positive(b.rabi, "drive.rabi", true);
    if (b.omega_eg) positive(b.omega_eg, "drive.omega_eg");
    return b;
}

GeometryBlock parse_geometry(const Json& g) {
    check_keys(g, "geometry", {"separation", "theta_d", "dipole_mag", "dipole_ea0", "positions", "dipole_axis"});
    GeometryBlock b;
    const auto mag = opt_number(g, "geometry", "dipole_mag");
    const auto ea0 = opt_number(g, "geometry", "dipole_ea0");
    if (mag && ea0) throw ScenarioError("geometry.dipole_ea0", "give exactly one of dipole_mag and dipole_ea0");
    if (!mag && !ea0) throw ScenarioError("geometry.dipole_mag", "required (or dipole_ea0)");
    b.dipole_mag = mag ? positive(mag, "geometry.dipole_mag") : positive(ea0, "geometry.dipole_ea0") * constants::ea0;

    b.separation = opt_number(g, "geometry", "separation");
    b.theta_d = opt_number(g, "geometry", "theta_d");
    const bool pair = b.separation || b.theta_d;
    const bool array = g.contains("positions") || g.contains("dipole_axis");
    if (pair && array)
        throw ScenarioError("geometry.positions", "give either separation/theta_d or positions/dipole_axis");
    if (pair) {
        positive(b.separation, "geometry.separation");
        if (!b.theta_d) throw ScenarioError("geometry.theta_d", "required");
        if (*b.theta_d < 0.0 || *b.theta_d > constants::pi)
            throw ScenarioError("geometry.theta_d", "must lie in [0, pi]");
    } else if (array) {
        const auto it = g.find("positions");
        if (it == g.end() || !it->is_array() || it->size() < 2)
            throw ScenarioError("geometry.positions", "must list at least two positions");
        for (std::size_t k = 0; k < it->size(); ++k)
            b.positions.push_back(vector3((*it)[k], "geometry.positions[" + std::to_string(k) + "]"));
        if (!g.contains("dipole_axis")) throw ScenarioError("geometry.dipole_axis", "required with positions");
        b.dipole_axis = vector3(g.at("dipole_axis"), "geometry.dipole_axis");
        if (b.dipole_axis->norm() == 0.0) throw ScenarioError("geometry.dipole_axis", "must be nonzero");
    } else {
        throw ScenarioError("geometry.separation", "required (or positions)");
    }
    return b;
}

NumericsBlock parse_numerics(const Json& n) {
    check_keys(n, "numerics",
               {"n_samples", "truncation", "discarded_tolerance", "degeneracy_tolerance", "coupling_tolerance",
                "stepper", "substeps", "step_fraction", "hierarchy_margin", "gap_tolerance"});
    NumericsBlock b;
    if (auto v = opt_integer(n, "numerics", "n_samples")) {
        if (*v < 64 || (*v & (*v - 1)) != 0) throw ScenarioError("numerics.n_samples", "must be a power of two >= 64");
        b.n_samples = static_cast<int>(*v);
    }
    if (auto v = opt_integer(n, "numerics", "truncation")) {
        if (*v < 1) throw ScenarioError("numerics.truncation", "must be >= 1");
        b.truncation = static_cast<int>(*v);
    }
    if (auto v = opt_integer(n, "numerics", "substeps")) {
        if (*v < 1) throw ScenarioError("numerics.substeps", "must be >= 1");
        b.substeps = static_cast<int>(*v);
    }
    auto tol = [&](const char* key, double& field) {
        if (auto v = opt_number(n, "numerics", key)) field = positive(v, std::string("numerics.") + key);
    };
    tol("discarded_tolerance", b.discarded_tolerance);
    tol("degeneracy_tolerance", b.degeneracy_tolerance);
    tol("coupling_tolerance", b.coupling_tolerance);
    tol("step_fraction", b.step_fraction);
    tol("hierarchy_margin", b.hierarchy_margin);
    tol("gap_tolerance", b.gap_tolerance);
    if (const auto it = n.find("stepper"); it != n.end()) {
        const auto s = it->is_string() ? it->get<std::string>() : std::string();
        if (s == "magnus4")
            b.stepper = floquet::Stepper::magnus4;
        else if (s == "midpoint")
            b.stepper = floquet::Stepper::midpoint;
        else
            throw ScenarioError("numerics.stepper", "must be \"magnus4\" or \"midpoint\"");
    }
    return b;
}

} // namespace

Scenario parse_scenario(const io::Json& doc) {
    check_keys(doc, "", {"drive", "geometry", "bath", "numerics", "task"});
    Scenario s;
    s.source = doc;
    if (doc.contains("drive")) s.drive = parse_drive(doc.at("drive"));
    if (doc.contains("geometry")) s.geometry = parse_geometry(doc.at("geometry"));
    if (doc.contains("bath")) {
        const auto& b = doc.at("bath");
        check_keys(b, "bath", {"temperature"});
        s.bath = bath::BathParams{positive(opt_number(b, "bath", "temperature"), "bath.temperature", true)};
    }
    if (doc.contains("numerics")) s.numerics = parse_numerics(doc.at("numerics"));
    if (doc.contains("task")) {
        if (!doc.at("task").is_object()) throw ScenarioError("task", "must be an object");
        s.task = doc.at("task");
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    const std::string text = io::read_text(path);
    io::Json doc;
    try {
        doc = io::Json::parse(text);
    } catch (const io::Json::parse_error& e) {
        throw ScenarioError("scenario", std::string("invalid JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

double Scenario::frequency_scale() const {
    return drive && drive->convention == FrequencyConvention::ordinary ? 2.0 * constants::pi : 1.0;
}

double Scenario::drive_omega() const {
    if (!drive) throw ScenarioError("drive", "required");
    return positive(drive->omega, "drive.omega");
}

floquet::DriveParams Scenario::drive_params() const {
    const double omega = drive_omega();
    const double rabi = positive(drive->rabi, "drive.rabi", true);
    if (drive->omega_eg) return floquet::DriveParams::from_transition(omega, rabi, *drive->omega_eg);
    if (drive->detuning) {
        if (omega - *drive->detuning <= 0.0) throw ScenarioError("drive.detuning", "gives omega_eg <= 0");
        return floquet::DriveParams::from_detuning(omega, rabi, *drive->detuning);
    }
    throw ScenarioError("drive.omega_eg", "required (or detuning)");
}

bath::AtomGeometry Scenario::pair_geometry() const {
    if (!geometry) throw ScenarioError("geometry", "required");
    if (!geometry->positions.empty()) {
        if (geometry->positions.size() != 2) throw ScenarioError("geometry.positions", "this task needs exactly two atoms");
        return atom_array().pair_geometry(0, 1);
    }
    return {*geometry->separation, geometry->dipole_mag, *geometry->theta_d};
}

bath::AtomArray Scenario::atom_array() const {
    if (!geometry) throw ScenarioError("geometry", "required");
    if (geometry->positions.empty()) return bath::AtomArray::pair(pair_geometry());
    try {
        return {geometry->positions, *geometry->dipole_axis, geometry->dipole_mag};
    } catch (const std::invalid_argument& e) {
        throw ScenarioError("geometry.positions", e.what());
    }
}

bath::BathParams Scenario::bath_params() const {
    if (!bath) throw ScenarioError("bath", "required");
    return *bath;
}

floquet::FloquetOptions Scenario::floquet_options() const {
    floquet::FloquetOptions o;
    o.truncation = numerics.truncation;
    o.discarded_tolerance = numerics.discarded_tolerance;
    o.degeneracy_tolerance = numerics.degeneracy_tolerance;
    o.stepper = numerics.stepper;
    o.substeps = numerics.substeps;
    return o;
}

floquet::TimeGrid Scenario::time_grid(const floquet::DriveParams& d) const {
    return floquet::TimeGrid::for_drive(d, numerics.n_samples);
}

io::Json Scenario::echo() const {
    io::Json out = source;
    out["numerics"] = io::Json{{"n_samples", numerics.n_samples},
                               {"truncation", numerics.truncation},
                               {"discarded_tolerance", numerics.discarded_tolerance},
                               {"degeneracy_tolerance", numerics.degeneracy_tolerance},
                               {"coupling_tolerance", numerics.coupling_tolerance},
                               {"stepper", numerics.stepper == floquet::Stepper::magnus4 ? "magnus4" : "midpoint"},
                               {"substeps", numerics.substeps},
                               {"step_fraction", numerics.step_fraction},
                               {"hierarchy_margin", numerics.hierarchy_margin},
                               {"gap_tolerance", numerics.gap_tolerance}};
    return out;
}

TaskReader::TaskReader(const io::Json& task, std::vector<std::string> allowed) : task_(task) {
    check_keys(task, "task", {allowed.begin(), allowed.end()});
}

std::optional<double> TaskReader::number(const std::string& key) const { return opt_number(task_, "task", key); }

std::optional<long long> TaskReader::integer(const std::string& key) const {
    return opt_integer(task_, "task", key);
}

std::optional<std::string> TaskReader::text(const std::string& key) const {
    const auto it = task_.find(key);
    if (it == task_.end()) return std::nullopt;
    if (!it->is_string()) throw ScenarioError("task." + key, "must be a string");
    return it->get<std::string>();
}

double TaskReader::number_or(const std::string& key, double fallback) const {
    return number(key).value_or(fallback);
}

long long TaskReader::integer_or(const std::string& key, long long fallback) const {
    return integer(key).value_or(fallback);
}

double TaskReader::required_number(const std::string& key) const {
    const auto v = number(key);
    if (!v) throw ScenarioError("task." + key, "required");
    return *v;
}

long long TaskReader::required_integer(const std::string& key) const {
    const auto v = integer(key);
    if (!v) throw ScenarioError("task." + key, "required");
    return *v;
}

int product_state_index(const std::string& label, const std::string& key) {
    static const char* labels[] = {"++", "+-", "-+", "--"};
    for (int k = 0; k < 4; ++k)
        if (label == labels[k]) return k;
    throw ScenarioError(key, "must be one of \"++\", \"+-\", \"-+\", \"--\"");
}

} // namespace fdd::scenario
