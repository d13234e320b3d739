#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "json.hpp"

#include "gaugeqpe/encodings.hpp"
#include "gaugeqpe/qpe.hpp"
#include "gaugeqpe/ring.hpp"

namespace gaugeqpe::io {

using json = nlohmann::json;

// Malformed file content (missing keys, wrong sizes, non-numeric entries).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// {"rows": r, "cols": c, "re": [...], "im": [...]}, row-major.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

// {"re": [...], "im": [...]}
json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const json& j);

// Either an energy problem ({"hamiltonian", "E_R", "state"}) or a unitary
// problem ({"unitary", "state"}).
using Problem = std::variant<enc::EnergyProblem, enc::UnitarySpec>;

Problem problem_from_json(const json& j);
json problem_to_json(const Problem& p);
Problem load_problem(const std::filesystem::path& path);
void save_problem(const std::filesystem::path& path, const Problem& p);

// State vector and unitary the problem poses, regardless of its form.
const ComplexVector& problem_state(const Problem& p);
UnitaryOperator problem_unitary(const Problem& p);
std::optional<double> problem_reference_energy(const Problem& p);

// phi,density[,density_color_0,...]
void write_density_csv(std::ostream& os, const ring::PositionDensity& d);
void write_density_csv(const std::filesystem::path& path, const ring::PositionDensity& d);
ring::PositionDensity read_density_csv(const std::filesystem::path& path);

// {"peaks": [{"phi", "weight", "width"}], "resolution"}
json peaks_to_json(const ring::PeakSet& peaks);
ring::PeakSet peaks_from_json(const json& j);

// k,probability
void write_distribution_csv(std::ostream& os, const qpe::Register1Distribution& d);
void write_distribution_csv(const std::filesystem::path& path, const qpe::Register1Distribution& d);

// {"k", "phi", "t", "mode", "seed"}
json estimate_to_json(const qpe::QpeResult& r, int t_bits);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace gaugeqpe::io
