// scenario.hpp — Strict JSON scenario files for the command-line front end
//
// Blocks: drive, geometry, bath, numerics, task. Unknown keys are rejected and
// physical quantities never take defaults; numerics defaults are echoed back.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fdd/bath.hpp"
#include "fdd/floquet.hpp"
#include "fdd/io.hpp"

namespace fdd::scenario {

enum class FrequencyConvention { angular, ordinary };

struct DriveBlock {
    FrequencyConvention convention{FrequencyConvention::angular};
    std::optional<double> omega;    // rad/s after conversion
    std::optional<double> rabi;
    std::optional<double> omega_eg;
    std::optional<double> detuning;
};

struct GeometryBlock {
    double dipole_mag{0.0}; // C m
    std::optional<double> separation;
    std::optional<double> theta_d;
    std::vector<Eigen::Vector3d> positions;
    std::optional<Eigen::Vector3d> dipole_axis;
};

struct NumericsBlock {
    int n_samples{1024};
    int truncation{16};
    double discarded_tolerance{1e-12};
    double degeneracy_tolerance{1e-12};
    double coupling_tolerance{1e-10};
    floquet::Stepper stepper{floquet::Stepper::magnus4};
    int substeps{1};
    double step_fraction{1.0 / 50.0};
    double hierarchy_margin{0.1};
    double gap_tolerance{1e-12};
};

struct Scenario {
    std::optional<DriveBlock> drive;
    std::optional<GeometryBlock> geometry;
    std::optional<bath::BathParams> bath;
    NumericsBlock numerics;
    io::Json task = io::Json::object();
    io::Json source; // the document as read

    // Each accessor throws ScenarioError naming the first missing or invalid key.
    floquet::DriveParams drive_params() const;
    double drive_omega() const;
    double frequency_scale() const; // 2 pi for the ordinary convention, else 1
    bath::AtomGeometry pair_geometry() const;
    bath::AtomArray atom_array() const;
    bath::BathParams bath_params() const;
    floquet::FloquetOptions floquet_options() const;
    floquet::TimeGrid time_grid(const floquet::DriveParams& drive) const;

    // Echo of the inputs with numerics defaults filled in.
    io::Json echo() const;
};

// Throws ScenarioError on malformed content.
Scenario parse_scenario(const io::Json& document);
// Throws IoError when the file cannot be read, ScenarioError on bad JSON.
Scenario load_scenario(const std::filesystem::path& path);

// Strict accessor for the task block.
class TaskReader {
public:
    TaskReader(const io::Json& task, std::vector<std::string> allowed);

    std::optional<double> number(const std::string& key) const;
    std::optional<long long> integer(const std::string& key) const;
    std::optional<std::string> text(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long long integer_or(const std::string& key, long long fallback) const;
    double required_number(const std::string& key) const;
    long long required_integer(const std::string& key) const;

private:
    const io::Json& task_;
};

// Index into {++, +-, -+, --} for labels "++", "+-", "-+", "--".
int product_state_index(const std::string& label, const std::string& key);

} // namespace fdd::scenario
