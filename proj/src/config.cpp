#include "decohere/config.hpp"

#include "decohere/errors.hpp"
#include "decohere/evolution.hpp"
#include "decohere/models.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace decohere::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError((path.empty() ? std::string("config") : path) + ": " + what);
}

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || it.key() == a;
        }
        if (!ok) {
            fail(at(path, it.key()), "unknown field");
        }
    }
}

const json& require(const json& j, const std::string& path, const char* key) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        fail(at(path, key), "missing");
    }
    return *it;
}

double read_real(const json& j, const std::string& path) {
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        fail(path, "must be finite");
    }
    return v;
}

std::uint64_t read_uint(const json& j, const std::string& path) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        fail(path, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

std::vector<double> read_real_list(const json& j, const std::string& path) {
    if (!j.is_array()) {
        fail(path, "expected an array");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(read_real(j[i], at(path, i)));
    }
    return out;
}

RealMatrix read_real_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
        fail(path, "expected a non-empty array of rows");
    }
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    RealMatrix m;
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = read_real_list(j[r], at(path, r));
        if (r == 0) {
            cols = row.size();
            if (cols == 0) {
                fail(at(path, r), "empty row");
            }
            m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (row.size() != cols) {
            fail(at(path, r), "ragged row (expected " + std::to_string(cols) + " entries)");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
        }
    }
    return m;
}

Matrix read_complex_matrix(const json& j, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected {\"re\": [[...]], \"im\": [[...]]}");
    }
    reject_unknown(j, path, {"re", "im"});
    const RealMatrix re = read_real_matrix(require(j, path, "re"), at(path, "re"));
    RealMatrix im = RealMatrix::Zero(re.rows(), re.cols());
    if (j.contains("im")) {
        im = read_real_matrix(j["im"], at(path, "im"));
        if (im.rows() != re.rows() || im.cols() != re.cols()) {
            fail(at(path, "im"), "shape differs from re");
        }
    }
    if (re.rows() != re.cols()) {
        fail(path, "matrix must be square");
    }
    Matrix m(re.rows(), re.cols());
    m.real() = re;
    m.imag() = im;
    return m;
}

Vector read_complex_vector(const json& j, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected {\"re\": [...], \"im\": [...]}");
    }
    reject_unknown(j, path, {"re", "im"});
    const auto re = read_real_list(require(j, path, "re"), at(path, "re"));
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im")) {
        im = read_real_list(j["im"], at(path, "im"));
        if (im.size() != re.size()) {
            fail(at(path, "im"), "length differs from re");
        }
    }
    if (re.empty()) {
        fail(at(path, "re"), "empty vector");
    }
    Vector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = cplx(re[i], im[i]);
    }
    return v;
}

json write_matrix(const Matrix& m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json rr = json::array();
        json ri = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ri.push_back(m(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return {{"re", re}, {"im", im}};
}

bool same(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same(const Vector& a, const Vector& b) { return a.size() == b.size() && (a.size() == 0 || a == b); }

bool same(const std::optional<Matrix>& a, const std::optional<Matrix>& b) {
    return a.has_value() == b.has_value() && (!a || same(*a, *b));
}

void validate(const RunConfig& cfg) {
    try {
        (void)DecoherenceParams(cfg.tau1, cfg.tau2, cfg.hbar);
    } catch (const ValidationError& e) {
        fail("tau1/tau2/hbar", e.what());
    }

    SpectralHamiltonian spec = [&] {
        try {
            return build_hamiltonian(cfg);
        } catch (const std::logic_error& e) {
            fail("hamiltonian", e.what());
        }
    }();
    const std::size_t n = spec.dim();

    try {
        const DensityMatrix rho = build_initial_state(cfg);
        if (rho.dim() != n) {
            fail("initial_state", "dimension " + std::to_string(rho.dim()) + " differs from hamiltonian dimension " +
                                      std::to_string(n));
        }
    } catch (const ValidationError& e) {
        if (std::string(e.what()).rfind("initial_state", 0) == 0) {
            throw;
        }
        fail("initial_state", e.what());
    } catch (const DomainError& e) {
        fail("initial_state", e.what());
    }

    const TimeGrid& g = cfg.times;
    if (!(g.start >= 0.0)) {
        fail("times.start", "must be >= 0");
    }
    if (!(g.stop > g.start)) {
        fail("times.stop", "must be > times.start");
    }
    if (g.count < 2) {
        fail("times.count", "must be >= 2");
    }
    if (g.count > 10'000'000) {
        fail("times.count", "must be <= 10000000");
    }
    const auto ts = g.values();
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (!(ts[i] > ts[i - 1])) {
            fail("times", "grid is not strictly increasing (spacing below double resolution)");
        }
    }

    std::set<std::string> names;
    for (std::size_t i = 0; i < cfg.observables.size(); ++i) {
        const auto& o = cfg.observables[i];
        const std::string path = at("observables", i);
        if (o.name.empty()) {
            fail(at(path, "name"), "must be non-empty");
        }
        if (!names.insert(o.name).second) {
            fail(at(path, "name"), "duplicate observable '" + o.name + "'");
        }
        if (!o.matrix) {
            if (o.name != "H") {
                fail(at(path, "matrix"), "missing (only \"H\" may omit its matrix)");
            }
            continue;
        }
        if (static_cast<std::size_t>(o.matrix->rows()) != n) {
            fail(at(path, "matrix"), "dimension differs from hamiltonian dimension " + std::to_string(n));
        }
        if (hermiticity_residual(*o.matrix) > 1e-10 * std::max(1.0, o.matrix->cwiseAbs().maxCoeff())) {
            fail(at(path, "matrix"), "observable must be Hermitian");
        }
    }

    for (std::size_t i = 0; i < cfg.track_elements.size(); ++i) {
        const auto [a, b] = cfg.track_elements[i];
        for (std::size_t k : {a, b}) {
            if (k >= n) {
                fail(at("track_elements", i), "index " + std::to_string(k) + " out of range for dimension " +
                                                  std::to_string(n));
            }
        }
    }
}

RunConfig from_json(const json& j) {
    if (!j.is_object()) {
        fail("", "top level must be a JSON object");
    }
    reject_unknown(j, "", {"hbar", "tau1", "tau2", "hamiltonian", "initial_state", "times", "observables",
                           "track_elements", "seed", "output"});
    RunConfig cfg;
    cfg.hbar = j.contains("hbar") ? read_real(j["hbar"], "hbar") : 1.0;
    cfg.tau1 = read_real(require(j, "", "tau1"), "tau1");
    cfg.tau2 = read_real(require(j, "", "tau2"), "tau2");

    const json& h = require(j, "", "hamiltonian");
    if (!h.is_object() || h.size() != 1) {
        fail("hamiltonian", "expected exactly one of {eigenvalues, matrix}");
    }
    reject_unknown(h, "hamiltonian", {"eigenvalues", "matrix"});
    if (h.contains("eigenvalues")) {
        cfg.hamiltonian.eigenvalues = read_real_list(h["eigenvalues"], "hamiltonian.eigenvalues");
        if (cfg.hamiltonian.eigenvalues->empty()) {
            fail("hamiltonian.eigenvalues", "empty list");
        }
    } else {
        cfg.hamiltonian.matrix = read_complex_matrix(h["matrix"], "hamiltonian.matrix");
    }

    const json& s = require(j, "", "initial_state");
    if (!s.is_object() || s.size() != 1) {
        fail("initial_state", "expected exactly one of {matrix, pure_vector, coherent}");
    }
    reject_unknown(s, "initial_state", {"matrix", "pure_vector", "coherent"});
    if (s.contains("matrix")) {
        cfg.initial_state.kind = StateKind::matrix;
        cfg.initial_state.matrix = read_complex_matrix(s["matrix"], "initial_state.matrix");
    } else if (s.contains("pure_vector")) {
        cfg.initial_state.kind = StateKind::pure_vector;
        cfg.initial_state.vector = read_complex_vector(s["pure_vector"], "initial_state.pure_vector");
    } else {
        const json& c = s["coherent"];
        const std::string path = "initial_state.coherent";
        if (!c.is_object()) {
            fail(path, "expected an object");
        }
        reject_unknown(c, path, {"alpha_re", "alpha_im", "dim"});
        cfg.initial_state.kind = StateKind::coherent;
        const double re = read_real(require(c, path, "alpha_re"), at(path, "alpha_re"));
        const double im = c.contains("alpha_im") ? read_real(c["alpha_im"], at(path, "alpha_im")) : 0.0;
        cfg.initial_state.alpha = cplx(re, im);
        cfg.initial_state.dim = read_uint(require(c, path, "dim"), at(path, "dim"));
    }

    const json& t = require(j, "", "times");
    if (!t.is_object()) {
        fail("times", "expected an object");
    }
    reject_unknown(t, "times", {"start", "stop", "count"});
    cfg.times.start = read_real(require(t, "times", "start"), "times.start");
    cfg.times.stop = read_real(require(t, "times", "stop"), "times.stop");
    cfg.times.count = read_uint(require(t, "times", "count"), "times.count");

    if (j.contains("observables")) {
        const json& obs = j["observables"];
        if (!obs.is_array()) {
            fail("observables", "expected an array");
        }
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const std::string path = at("observables", i);
            if (!obs[i].is_object()) {
                fail(path, "expected an object");
            }
            reject_unknown(obs[i], path, {"name", "matrix"});
            const json& name = require(obs[i], path, "name");
            if (!name.is_string()) {
                fail(at(path, "name"), "expected a string");
            }
            ObservableSpec o{name.get<std::string>(), std::nullopt};
            if (obs[i].contains("matrix")) {
                o.matrix = read_complex_matrix(obs[i]["matrix"], at(path, "matrix"));
            }
            cfg.observables.push_back(std::move(o));
        }
    }

    if (j.contains("track_elements")) {
        const json& te = j["track_elements"];
        if (!te.is_array()) {
            fail("track_elements", "expected an array of [n, m] pairs");
        }
        for (std::size_t i = 0; i < te.size(); ++i) {
            const std::string path = at("track_elements", i);
            if (!te[i].is_array() || te[i].size() != 2) {
                fail(path, "expected an [n, m] pair");
            }
            cfg.track_elements.emplace_back(read_uint(te[i][0], at(path, 0)), read_uint(te[i][1], at(path, 1)));
        }
    }

    if (j.contains("seed")) {
        cfg.seed = read_uint(j["seed"], "seed");
    }
    if (j.contains("output")) {
        if (!j["output"].is_string()) {
            fail("output", "expected a string");
        }
        cfg.output = j["output"].get<std::string>();
    }
    return cfg;
}

}  // namespace

std::vector<double> TimeGrid::values() const {
    std::vector<double> out(count);
    const double h = spacing();
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = start + h * static_cast<double>(i);
    }
    if (count > 0) {
        out.back() = stop;
    }
    return out;
}

std::size_t RunConfig::dim() const {
    if (hamiltonian.eigenvalues) {
        return hamiltonian.eigenvalues->size();
    }
    return hamiltonian.matrix ? static_cast<std::size_t>(hamiltonian.matrix->rows()) : 0;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    const StateSpec& sa = a.initial_state;
    const StateSpec& sb = b.initial_state;
    bool state = sa.kind == sb.kind;
    if (state) {
        switch (sa.kind) {
        case StateKind::matrix: state = same(sa.matrix, sb.matrix); break;
        case StateKind::pure_vector: state = same(sa.vector, sb.vector); break;
        case StateKind::coherent: state = sa.alpha == sb.alpha && sa.dim == sb.dim; break;
        }
    }
    if (a.observables.size() != b.observables.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.observables.size(); ++i) {
        if (a.observables[i].name != b.observables[i].name || !same(a.observables[i].matrix, b.observables[i].matrix)) {
            return false;
        }
    }
    return state && a.hbar == b.hbar && a.tau1 == b.tau1 && a.tau2 == b.tau2 &&
           a.hamiltonian.eigenvalues == b.hamiltonian.eigenvalues &&
           same(a.hamiltonian.matrix, b.hamiltonian.matrix) && a.times.start == b.times.start &&
           a.times.stop == b.times.stop && a.times.count == b.times.count && a.track_elements == b.track_elements &&
           a.seed == b.seed && a.output == b.output;
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: malformed JSON: ") + e.what());
    }
    RunConfig cfg = from_json(j);
    validate(cfg);
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["hbar"] = cfg.hbar;
    j["tau1"] = cfg.tau1;
    j["tau2"] = cfg.tau2;
    if (cfg.hamiltonian.eigenvalues) {
        j["hamiltonian"] = {{"eigenvalues", *cfg.hamiltonian.eigenvalues}};
    } else if (cfg.hamiltonian.matrix) {
        j["hamiltonian"] = {{"matrix", write_matrix(*cfg.hamiltonian.matrix)}};
    }
    const StateSpec& s = cfg.initial_state;
    switch (s.kind) {
    case StateKind::matrix: j["initial_state"] = {{"matrix", write_matrix(s.matrix)}}; break;
    case StateKind::pure_vector: {
        std::vector<double> re, im;
        for (Eigen::Index i = 0; i < s.vector.size(); ++i) {
            re.push_back(s.vector(i).real());
            im.push_back(s.vector(i).imag());
        }
        j["initial_state"] = {{"pure_vector", {{"re", re}, {"im", im}}}};
        break;
    }
    case StateKind::coherent:
        j["initial_state"] = {
            {"coherent", {{"alpha_re", s.alpha.real()}, {"alpha_im", s.alpha.imag()}, {"dim", s.dim}}}};
        break;
    }
    j["times"] = {{"start", cfg.times.start}, {"stop", cfg.times.stop}, {"count", cfg.times.count}};
    json obs = json::array();
    for (const auto& o : cfg.observables) {
        json e = {{"name", o.name}};
        if (o.matrix) {
            e["matrix"] = write_matrix(*o.matrix);
        }
        obs.push_back(e);
    }
    j["observables"] = obs;
    json te = json::array();
    for (const auto& [a, b] : cfg.track_elements) {
        te.push_back({a, b});
    }
    j["track_elements"] = te;
    if (cfg.seed) {
        j["seed"] = *cfg.seed;
    }
    if (cfg.output) {
        j["output"] = *cfg.output;
    }
    return j.dump(2) + "\n";
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("config: cannot open '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

DecoherenceParams build_params(const RunConfig& cfg) { return DecoherenceParams(cfg.tau1, cfg.tau2, cfg.hbar); }

SpectralHamiltonian build_hamiltonian(const RunConfig& cfg) {
    if (cfg.hamiltonian.eigenvalues) {
        return SpectralHamiltonian::from_eigenvalues(*cfg.hamiltonian.eigenvalues);
    }
    if (cfg.hamiltonian.matrix) {
        return diagonalize_hamiltonian(*cfg.hamiltonian.matrix);
    }
    throw ValidationError("hamiltonian: missing");
}

DensityMatrix build_initial_state(const RunConfig& cfg) {
    const StateSpec& s = cfg.initial_state;
    switch (s.kind) {
    case StateKind::matrix: return validate_density_matrix(s.matrix);
    case StateKind::pure_vector: {
        const double norm = s.vector.norm();
        if (std::abs(norm - 1.0) > 1e-10) {
            fail("initial_state.pure_vector", "vector must have unit norm (|psi| = " + std::to_string(norm) + ")");
        }
        return validate_density_matrix(s.vector * s.vector.adjoint());
    }
    case StateKind::coherent: {
        models::OscillatorScenario sc{s.alpha, 1.0, s.dim};
        try {
            return models::coherent_state(sc);
        } catch (const DomainError& e) {
            fail("initial_state.coherent.dim", e.what());
        }
    }
    }
    throw ValidationError("initial_state: missing");
}

Matrix build_observable(const RunConfig& cfg, const ObservableSpec& obs, const SpectralHamiltonian& spec) {
    (void)cfg;
    if (obs.matrix) {
        return *obs.matrix;
    }
    return spec.matrix(Basis::input);
}

Matrix build_observable(const RunConfig& cfg, const std::string& name, const SpectralHamiltonian& spec) {
    for (const auto& o : cfg.observables) {
        if (o.name == name) {
            return build_observable(cfg, o, spec);
        }
    }
    if (name == "H") {
        return spec.matrix(Basis::input);
    }
    throw ValidationError("observable '" + name + "' is not defined in the config");
}

std::optional<std::string> cronon_warning(const TimeGrid& grid, const DecoherenceParams& params) {
    const double ratio = grid.spacing() / params.tau2();
    if (std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio) && std::round(ratio) >= 1.0) {
        return std::nullopt;
    }
    std::ostringstream os;
    os.precision(17);
    os << "warning: time spacing " << grid.spacing() << " is not a whole number of cronons (tau2 = " << params.tau2()
       << "); values between cronon grid points use the continuous-time interpolation";
    return os.str();
}

}  // namespace decohere::cli
