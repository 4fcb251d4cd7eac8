#include "nettrack/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "nettrack/errors.hpp"

namespace nettrack {

Matrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected a non-empty 2d array");
    const int rows = static_cast<int>(j.size());
    if (!j[0].is_array()) throw SchemaError(what + ": expected a 2d array");
    const int cols = static_cast<int>(j[0].size());
    if (cols == 0) throw SchemaError(what + ": empty row");
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
            throw SchemaError(what + ": ragged rows");
        for (int c = 0; c < cols; ++c) {
            if (!j[i][c].is_number()) throw SchemaError(what + ": non-numeric entry");
            m(i, c) = j[i][c].get<double>();
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::vector<Matrix> matrix_list_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected a non-empty array");
    std::vector<Matrix> out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(matrix_from_json(j[i], what + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace

Plant plant_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("plant: expected a JSON object");
    for (const char* key : {"A", "H", "V", "R", "graph"})
        if (!j.contains(key)) throw SchemaError(std::string("plant: missing key '") + key + "'");
    Plant p;
    p.A = matrix_from_json(j["A"], "plant A");
    p.H = matrix_list_from_json(j["H"], "plant H");
    p.V = matrix_from_json(j["V"], "plant V");
    p.R = matrix_list_from_json(j["R"], "plant R");
    if (!j["graph"].is_string()) throw SchemaError("plant: 'graph' must be a grammar string");
    p.graph = parse_graph(j["graph"].get<std::string>());
    validate_plant(p);
    return p;
}

Plant load_plant(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open plant file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SchemaError("plant file " + path + ": " + e.what());
    }
    return plant_from_json(j);
}

json to_json(const CapacityReport& r) {
    json j;
    if (r.infinite) {
        j["capacity"] = nullptr;
        j["infinite"] = true;
    } else {
        j["capacity"] = r.capacity;
        j["infinite"] = false;
    }
    j["achieved_norm"] = r.achieved_norm;
    j["W"] = matrix_to_json(r.W_star);
    j["B"] = matrix_to_json(r.B_star);
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    return j;
}

json to_json(const ScalarGainReport& r) {
    json j;
    j["lambda_min"] = r.lambda_min;
    j["lambda_max"] = r.lambda_max;
    if (r.capacity_infinite) {
        j["C_alpha"] = nullptr;
        j["infinite"] = true;
    } else {
        j["C_alpha"] = r.C_alpha;
        j["infinite"] = false;
    }
    j["alpha_opt"] = r.alpha_opt;
    j["min_norm"] = r.min_norm;
    if (r.a.has_value()) j["a"] = *r.a;
    if (r.interval.has_value()) {
        j["interval"] = json::array({r.interval->first, r.interval->second});
    } else if (r.a.has_value()) {
        j["interval"] = nullptr;
    }
    return j;
}

json to_json(const LocalBoundReport& r) {
    json j;
    j["method"] = r.method == LocalBoundReport::Method::circulant_isomorphic
                      ? "circulant-isomorphic"
                      : "cycle-subgraph";
    j["tau"] = r.tau;
    j["lambda2_used"] = r.lambda2_used;
    j["lambda_max_bound"] = r.lambda_max_bound;
    j["C_loc"] = std::isfinite(r.C_loc) ? json(r.C_loc) : json(nullptr);
    j["a"] = r.a;
    if (r.interval.has_value()) {
        j["interval"] = json::array({r.interval->first, r.interval->second});
    } else {
        j["interval"] = nullptr;
    }
    return j;
}

json to_json(const Design& d) {
    json j;
    j["kind"] = d.kind == Design::Kind::scalar ? "scalar" : "full";
    switch (d.provenance) {
        case Design::Provenance::ntc_solver: j["provenance"] = "ntc-solver"; break;
        case Design::Provenance::scalar_closed_form: j["provenance"] = "scalar-closed-form"; break;
        case Design::Provenance::lmi_ccl: j["provenance"] = "lmi-ccl"; break;
        case Design::Provenance::local_interval: j["provenance"] = "local-interval"; break;
        case Design::Provenance::user: j["provenance"] = "user"; break;
    }
    if (d.alpha.has_value()) j["alpha"] = *d.alpha;
    j["W"] = matrix_to_json(d.W);
    j["B"] = matrix_to_json(d.B);
    return j;
}

json to_json(const CclResult& r) {
    json j;
    switch (r.status) {
        case CclResult::Status::converged: j["status"] = "converged"; break;
        case CclResult::Status::infeasible: j["status"] = "infeasible"; break;
        case CclResult::Status::max_iterations: j["status"] = "max-iterations"; break;
    }
    j["final_rho"] = r.final_rho;
    j["iterations"] = r.iterations;
    j["trace_sequence"] = r.trace_sequence;
    if (r.design.has_value()) j["design"] = to_json(*r.design);
    j["W"] = matrix_to_json(r.W);
    j["B"] = matrix_to_json(r.B);
    return j;
}

json to_json(const SimulationResult& r) {
    json j;
    j["trials"] = r.trials;
    j["steps"] = r.steps;
    j["seed"] = r.seed;
    j["cov_norm"] = r.empirical_cov_norm;
    j["cov_norm_stderr"] = r.cov_norm_stderr;
    j["per_agent_mse"] = r.per_agent_mse;
    double fm = 0.0;
    for (double x : r.final_mean) fm += x * x;
    j["final_mean_norm"] = std::sqrt(fm);
    j["final_std"] = r.final_std;
    j["diverged"] = r.diverged;
    if (r.diverged) j["diverged_step"] = r.diverged_step;
    return j;
}

}  // namespace nettrack
