#pragma once

#include <rcla/autoselect.hpp>
#include <rcla/features.hpp>
#include <rcla/persistence.hpp>
#include <rcla/point_cloud.hpp>
#include <rcla/poisson.hpp>
#include <rcla/reduction.hpp>
#include <rcla/synth.hpp>

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rcla {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view tok, std::size_t line) {
    tok = trim(tok);
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || tok.empty())
        throw IoError("line " + std::to_string(line) + ": cannot parse number '" + std::string(tok) + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

} // namespace detail

// ---- point clouds: headerless CSV, one point per row --------------------------------

inline PointCloud parse_points_csv(std::istream& in) {
    PointCloud cloud;
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> row;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty()) continue;
        row.clear();
        for (auto tok : detail::split(t, ',')) row.push_back(detail::parse_double(tok, lineno));
        if (!cloud.empty() && row.size() != cloud.dim())
            throw IoError("line " + std::to_string(lineno) + ": expected " + std::to_string(cloud.dim()) + " columns");
        cloud.push_back(row);
    }
    return cloud;
}

inline PointCloud read_points_csv(const std::string& path) {
    auto in = detail::open_in(path);
    return parse_points_csv(in);
}

inline void write_points_csv(std::ostream& out, const PointCloud& cloud) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud[i];
        for (std::size_t d = 0; d < p.size(); ++d) out << (d ? "," : "") << format_double(p[d]);
        out << '\n';
    }
}

inline void write_points_csv(const std::string& path, const PointCloud& cloud) {
    auto out = detail::open_out(path);
    write_points_csv(out, cloud);
}

/// Integers separated by commas and/or newlines.
inline std::vector<std::int64_t> read_counts_csv(const std::string& path) {
    auto in = detail::open_in(path);
    std::vector<std::int64_t> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty()) continue;
        for (auto tok : detail::split(t, ',')) {
            tok = detail::trim(tok);
            std::int64_t v = 0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || tok.empty())
                throw IoError("line " + std::to_string(lineno) + ": cannot parse count '" + std::string(tok) + "'");
            out.push_back(v);
        }
    }
    return out;
}

// ---- OBJ vertices -----------------------------------------------------------------

inline PointCloud parse_obj_vertices(std::istream& in) {
    PointCloud cloud(3);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view t = detail::trim(line);
        if (t.size() < 2 || t[0] != 'v' || (t[1] != ' ' && t[1] != '\t')) continue;
        std::istringstream ss{std::string(t.substr(2))};
        std::string tok;
        double xyz[3];
        for (double& c : xyz) {
            if (!(ss >> tok)) throw IoError("line " + std::to_string(lineno) + ": malformed vertex");
            c = detail::parse_double(tok, lineno);
        }
        cloud.push_back(xyz);
    }
    return cloud;
}

struct ObjIngestOptions {
    std::size_t sample = 0; ///< 0 keeps every vertex
    std::uint64_t seed = 0;
    bool center_unit = false;
};

/// Uniform subsample of n distinct points (without replacement), in draw order.
inline PointCloud subsample(const PointCloud& cloud, std::size_t n, Rng& rng) {
    if (n > cloud.size()) throw std::invalid_argument("sample size exceeds vertex count");
    std::vector<std::size_t> idx(cloud.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    PointCloud out(cloud.dim());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + rng.index(idx.size() - i);
        std::swap(idx[i], idx[j]);
        out.push_back(cloud[idx[i]]);
    }
    return out;
}

/// Translates the bounding-box center to (0.5, ..., 0.5); shrinks uniformly only if the
/// box is wider than the unit cube.
inline PointCloud center_in_unit_cube(const PointCloud& cloud) {
    if (cloud.empty()) return cloud;
    const std::size_t m = cloud.dim();
    std::vector<double> lo(cloud[0].begin(), cloud[0].end()), hi = lo;
    for (std::size_t i = 1; i < cloud.size(); ++i)
        for (std::size_t d = 0; d < m; ++d) {
            lo[d] = std::min(lo[d], cloud[i][d]);
            hi[d] = std::max(hi[d], cloud[i][d]);
        }
    double width = 0.0;
    for (std::size_t d = 0; d < m; ++d) width = std::max(width, hi[d] - lo[d]);
    const double s = width > 1.0 ? 1.0 / width : 1.0;
    PointCloud out(m);
    std::vector<double> p(m);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (std::size_t d = 0; d < m; ++d) p[d] = 0.5 + s * (cloud[i][d] - 0.5 * (lo[d] + hi[d]));
        out.push_back(p);
    }
    return out;
}

inline PointCloud read_obj_vertices(const std::string& path, const ObjIngestOptions& options = {}) {
    auto in = detail::open_in(path);
    PointCloud cloud = parse_obj_vertices(in);
    if (options.sample > 0) {
        Rng rng(options.seed);
        cloud = subsample(cloud, options.sample, rng);
    }
    if (options.center_unit) cloud = center_in_unit_cube(cloud);
    return cloud;
}

// ---- JSON ---------------------------------------------------------------------------

using nlohmann::json;

inline constexpr int schema_version = 1;

inline json to_json(const PersistenceDiagram& d) {
    json pairs = json::array();
    for (const auto& p : d.pairs) {
        if (p.essential())
            pairs.push_back({p.birth, "inf"});
        else
            pairs.push_back({p.birth, p.death});
    }
    return {{"degree", d.degree}, {"pairs", pairs}};
}

inline PersistenceDiagram diagram_from_json(const json& j) {
    PersistenceDiagram d;
    d.degree = j.at("degree").get<int>();
    for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2) throw IoError("diagram pair must be [birth, death]");
        PersistencePair pp;
        pp.birth = p[0].get<double>();
        if (p[1].is_string()) {
            if (p[1].get<std::string>() != "inf") throw IoError("death must be a number or \"inf\"");
            pp.death = infinity;
        } else {
            pp.death = p[1].get<double>();
        }
        d.pairs.push_back(pp);
    }
    return d;
}

inline json diagrams_to_json(const std::vector<PersistenceDiagram>& ds, FiltrationScale scale) {
    json arr = json::array();
    for (const auto& d : ds) arr.push_back(to_json(d));
    return {{"schema_version", schema_version}, {"scale", scale == FiltrationScale::eps ? "eps" : "dist"}, {"diagrams", arr}};
}

/// Accepts {"diagrams": [...]}, a bare array of diagrams, or a single diagram object.
inline std::vector<PersistenceDiagram> diagrams_from_json(const json& j) {
    std::vector<PersistenceDiagram> out;
    const json* arr = &j;
    if (j.is_object() && j.contains("diagrams")) arr = &j.at("diagrams");
    if (arr->is_array()) {
        for (const auto& d : *arr) out.push_back(diagram_from_json(d));
    } else {
        out.push_back(diagram_from_json(*arr));
    }
    return out;
}

inline json read_json(const std::string& path) {
    auto in = detail::open_in(path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("'" + path + "': " + e.what());
    }
}

inline void write_json(const std::string& path, const json& j) {
    auto out = detail::open_out(path);
    out << j.dump(2) << '\n';
}

inline json to_json(const CellKey& key) { return key.index; }

inline json to_json(const ReducedCloud& r) {
    json cells = json::array();
    for (const auto& k : r.kept_cells) cells.push_back(to_json(k));
    return {{"schema_version", schema_version},
            {"grid", {{"origin", r.grid.origin}, {"delta", r.grid.delta}, {"extent", r.grid.extent}}},
            {"kept_cells", cells},
            {"kept_count", r.kept_cells.size()},
            {"dropped_count", r.dropped_count}};
}

inline json to_json(const CandidateReport& r) {
    json j{{"delta", r.delta}, {"M", r.M},           {"Z0", r.Z0},         {"p_L", r.p_L},
           {"mu_U", r.mu_U},   {"k", r.k},           {"n_reps", r.n_reps}, {"nn_mean", r.nn_mean},
           {"nn_sd", r.nn_sd}, {"beta0", r.beta0},   {"rejected", r.rejected}};
    j["J"] = std::isfinite(r.J) ? json(r.J) : json(nullptr);
    if (r.rejected) j["reason"] = r.reason;
    return j;
}

inline json to_json(const std::vector<CandidateReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

inline json to_json(const AutoSelectResult& r) {
    return {{"schema_version", schema_version},
            {"delta_star", r.delta_star},
            {"k_star", r.k_star},
            {"best_index", r.best_index},
            {"reports", to_json(r.reports)}};
}

inline json to_json(const StabilityCertificate& c) {
    return {{"alpha", c.alpha}, {"beta", c.beta}, {"confidence", c.confidence}, {"bound", c.bound}, {"mu", c.mu}};
}

// ---- CSV tables ---------------------------------------------------------------------

inline void write_features_csv(std::ostream& out, const FeatureVector& fv) {
    for (std::size_t i = 0; i < fv.schema.size(); ++i) out << (i ? "," : "") << fv.schema[i].name();
    out << '\n';
    for (std::size_t i = 0; i < fv.values.size(); ++i) out << (i ? "," : "") << format_double(fv.values[i]);
    out << '\n';
}

/// (degree, birth, death) rows with a header; infinite deaths written as "inf".
inline void write_diagram_rows(std::ostream& out, const std::vector<PersistenceDiagram>& ds) {
    out << "degree,birth,death\n";
    for (const auto& d : ds)
        for (const auto& p : d.pairs) out << d.degree << ',' << format_double(p.birth) << ',' << format_double(p.death) << '\n';
}

inline std::vector<PersistenceDiagram> parse_diagram_rows(std::istream& in) {
    std::vector<PersistenceDiagram> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty() || lineno == 1) continue;
        const auto cols = detail::split(t, ',');
        if (cols.size() != 3) throw IoError("line " + std::to_string(lineno) + ": expected degree,birth,death");
        const int degree = static_cast<int>(detail::parse_double(cols[0], lineno));
        const double birth = detail::parse_double(cols[1], lineno);
        const double death = detail::trim(cols[2]) == "inf" ? infinity : detail::parse_double(cols[2], lineno);
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& d) { return d.degree == degree; });
        if (it == out.end()) {
            out.push_back({degree, {}});
            it = out.end() - 1;
        }
        it->pairs.push_back({birth, death});
    }
    return out;
}

} // namespace rcla
