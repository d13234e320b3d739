#include "gaugeqpe/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gaugeqpe::io {

namespace {

std::vector<double> number_array(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) throw FormatError(std::string("missing numeric array \"") + key + "\"");
    std::vector<double> out;
    out.reserve(j.at(key).size());
    for (const auto& x : j.at(key)) {
        if (!x.is_number()) throw FormatError(std::string("non-numeric entry in \"") + key + "\"");
        out.push_back(x.get<double>());
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            re.push_back(m(i, j).real());
            im.push_back(m(i, j).imag());
        }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols"))
        throw FormatError("matrix: expected object with \"rows\" and \"cols\"");
    if (!j.at("rows").is_number_integer() || !j.at("cols").is_number_integer())
        throw FormatError("matrix: \"rows\"/\"cols\" must be integers");
    const auto rows = j.at("rows").get<long long>();
    const auto cols = j.at("cols").get<long long>();
    if (rows <= 0 || cols <= 0) throw FormatError("matrix: dimensions must be positive");
    const auto re = number_array(j, "re");
    // An absent imaginary part means a real matrix.
    const auto im = j.contains("im") ? number_array(j, "im") : std::vector<double>(re.size(), 0.0);
    const auto count = static_cast<std::size_t>(rows * cols);
    if (re.size() != count || im.size() != count) {
        std::ostringstream os;
        os << "matrix: expected " << count << " entries, got re=" << re.size() << " im=" << im.size();
        throw FormatError(os.str());
    }
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k) {
            const auto idx = static_cast<std::size_t>(i * cols + k);
            m(i, k) = cplx(re[idx], im[idx]);
        }
    if (!m.allFinite()) throw FormatError("matrix: non-finite entries");
    return m;
}

json vector_to_json(const ComplexVector& v) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v[i].real());
        im.push_back(v[i].imag());
    }
    return {{"re", re}, {"im", im}};
}

ComplexVector vector_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("vector: expected object with \"re\"/\"im\"");
    const auto re = number_array(j, "re");
    const auto im = j.contains("im") ? number_array(j, "im") : std::vector<double>(re.size(), 0.0);
    if (re.size() != im.size() || re.empty()) throw FormatError("vector: \"re\" and \"im\" lengths differ or are empty");
    ComplexVector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) v[static_cast<Eigen::Index>(i)] = cplx(re[i], im[i]);
    return v;
}

Problem problem_from_json(const json& j) {
    if (!j.is_object() || !j.contains("state")) throw FormatError("problem: missing \"state\"");
    const ComplexVector state = vector_from_json(j.at("state"));
    if (j.contains("hamiltonian")) {
        if (!j.contains("E_R") || !j.at("E_R").is_number()) throw FormatError("problem: missing numeric \"E_R\"");
        enc::EnergyProblem p{HermitianOperator(matrix_from_json(j.at("hamiltonian"))), j.at("E_R").get<double>(), state};
        p.validate();
        return p;
    }
    if (j.contains("unitary")) {
        enc::UnitarySpec s{UnitaryOperator(matrix_from_json(j.at("unitary")), 1e-9), state, std::nullopt};
        s.validate();
        return s;
    }
    throw FormatError("problem: expected \"hamiltonian\" or \"unitary\"");
}

json problem_to_json(const Problem& p) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, enc::EnergyProblem>) {
                return {{"hamiltonian", matrix_to_json(v.hamiltonian.matrix())},
                        {"E_R", v.reference_energy},
                        {"state", vector_to_json(v.candidate)}};
            } else {
                return {{"unitary", matrix_to_json(v.u.matrix())}, {"state", vector_to_json(v.eigenstate)}};
            }
        },
        p);
}

json read_json(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    auto os = open_out(path);
    os << std::setw(2) << j << '\n';
}

Problem load_problem(const std::filesystem::path& path) {
    const json j = read_json(path);
    try {
        return problem_from_json(j);
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void save_problem(const std::filesystem::path& path, const Problem& p) { write_json(path, problem_to_json(p)); }

const ComplexVector& problem_state(const Problem& p) {
    if (const auto* e = std::get_if<enc::EnergyProblem>(&p)) return e->candidate;
    return std::get<enc::UnitarySpec>(p).eigenstate;
}

UnitaryOperator problem_unitary(const Problem& p) {
    if (const auto* e = std::get_if<enc::EnergyProblem>(&p)) return enc::problem_unitary(*e);
    return std::get<enc::UnitarySpec>(p).u;
}

std::optional<double> problem_reference_energy(const Problem& p) {
    if (const auto* e = std::get_if<enc::EnergyProblem>(&p)) return e->reference_energy;
    return std::nullopt;
}

void write_density_csv(std::ostream& os, const ring::PositionDensity& d) {
    os << "phi,density";
    if (d.per_color)
        for (Eigen::Index a = 0; a < d.per_color->cols(); ++a) os << ",density_color_" << a;
    os << '\n' << std::setprecision(17);
    for (int j = 0; j < d.grid_size; ++j) {
        os << d.phi_grid[j] << ',' << d.density[j];
        if (d.per_color)
            for (Eigen::Index a = 0; a < d.per_color->cols(); ++a) os << ',' << (*d.per_color)(j, a);
        os << '\n';
    }
}

void write_density_csv(const std::filesystem::path& path, const ring::PositionDensity& d) {
    auto os = open_out(path);
    write_density_csv(os, d);
}

ring::PositionDensity read_density_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line) || line.rfind("phi,density", 0) != 0) throw FormatError(path.string() + ": bad density header");
    const auto columns = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ',') + 1);
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<Eigen::Index>(row.size()) != columns) throw FormatError(path.string() + ": ragged row");
        rows.push_back(std::move(row));
    }
    ring::PositionDensity d;
    d.grid_size = static_cast<int>(rows.size());
    d.phi_grid.resize(d.grid_size);
    d.density.resize(d.grid_size);
    if (columns > 2) d.per_color = Eigen::MatrixXd(d.grid_size, columns - 2);
    for (int j = 0; j < d.grid_size; ++j) {
        d.phi_grid[j] = rows[static_cast<std::size_t>(j)][0];
        d.density[j] = rows[static_cast<std::size_t>(j)][1];
        for (Eigen::Index a = 2; a < columns; ++a) (*d.per_color)(j, a - 2) = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
    }
    return d;
}

json peaks_to_json(const ring::PeakSet& peaks) {
    json arr = json::array();
    for (const auto& p : peaks.peaks) arr.push_back({{"phi", p.phi}, {"weight", p.weight}, {"width", p.width}});
    return {{"peaks", arr}, {"resolution", peaks.resolution}};
}

ring::PeakSet peaks_from_json(const json& j) {
    ring::PeakSet out;
    out.resolution = j.at("resolution").get<double>();
    for (const auto& p : j.at("peaks"))
        out.peaks.push_back({p.at("phi").get<double>(), p.at("weight").get<double>(), p.at("width").get<double>()});
    return out;
}

void write_distribution_csv(std::ostream& os, const qpe::Register1Distribution& d) {
    os << "k,probability\n" << std::setprecision(17);
    for (std::size_t k = 0; k < d.probs.size(); ++k) os << k << ',' << d.probs[k] << '\n';
}

void write_distribution_csv(const std::filesystem::path& path, const qpe::Register1Distribution& d) {
    auto os = open_out(path);
    write_distribution_csv(os, d);
}

json estimate_to_json(const qpe::QpeResult& r, int t_bits) {
    const bool sampled = r.distribution.mode == qpe::MeasureMode::sampled;
    return {{"k", r.k_best},
            {"phi", r.phi},
            {"t", t_bits},
            {"mode", sampled ? "sampled" : "exact"},
            {"seed", r.distribution.seed}};
}

}  // namespace gaugeqpe::io
