#include <rcla/rcla.hpp>

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace rcla;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out_dir;
};

std::string resolve(const Globals& g, const std::string& path) {
    if (path.empty() || g.out_dir.empty() || fs::path(path).is_absolute()) return path;
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / path).string();
}

void emit(const Globals& g, const std::string& path, const json& j) {
    if (path.empty())
        std::cout << j.dump(2) << '\n';
    else
        write_json(resolve(g, path), j);
}

FiltrationScale parse_scale(const std::string& s) {
    if (s == "eps") return FiltrationScale::eps;
    if (s == "dist") return FiltrationScale::dist;
    throw std::invalid_argument("scale must be eps or dist");
}

Representative parse_mode(const std::string& s) {
    if (s == "center") return Representative::center;
    if (s == "sample") return Representative::sample;
    throw std::invalid_argument("mode must be center or sample");
}

PersistenceDiagram pick_degree(const std::vector<PersistenceDiagram>& ds, int degree) {
    for (const auto& d : ds)
        if (d.degree == degree) return d;
    throw std::invalid_argument("diagram file has no degree " + std::to_string(degree));
}

std::vector<PersistenceDiagram> load_diagrams(const std::string& path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open " + path);
        return parse_diagram_rows(in);
    }
    return diagrams_from_json(read_json(path));
}

void add_auto_options(CLI::App* cmd, AutoSelectConfig& c) {
    cmd->add_option("--alpha-fp", c.alpha_fp, "expected noise-only cubes allowed");
    cmd->add_option("--eta", c.eta, "component penalty weight");
    cmd->add_option("--cr", c.c_r, "radius-graph radius in units of delta");
    cmd->add_option("--n-min", c.n_min, "minimum representatives");
    cmd->add_option("--gamma", c.gamma, "posterior tail level");
    cmd->add_option("--candidates", c.n_candidates, "number of delta candidates");
    cmd->add_option("--q-lo", c.q_lo);
    cmd->add_option("--q-hi", c.q_hi);
    cmd->add_option("--orders", c.orders, "neighbour orders pooled for candidates");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice reduction and denoising of point clouds"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--threads", g.threads, "worker threads for experiments");
    app.add_option("--out-dir", g.out_dir, "directory for relative output paths");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a noisy circle or two-circle dataset");
    std::string synth_kind = "circle", synth_out, synth_labels;
    std::size_t synth_n = 1000;
    double synth_r = 0.1;
    synth->add_option("--kind", synth_kind)->check(CLI::IsMember({"circle", "two-circles"}));
    synth->add_option("--n", synth_n, "shape points");
    synth->add_option("--r", synth_r, "noise ratio");
    synth->add_option("--out", synth_out)->required();
    synth->add_option("--labels", synth_labels, "optional per-point label CSV");
    synth->callback([&] {
        Rng rng(g.seed);
        const PointCloud shape = parse_dataset(synth_kind) == DatasetKind::circle ? sample_circle(synth_n, Circle{}, rng)
                                                                                 : sample_two_circles(synth_n, rng);
        const LabeledCloud data = make_noisy_dataset(shape, synth_r, Box::unit(2), rng);
        write_points_csv(resolve(g, synth_out), data.points);
        if (!synth_labels.empty()) {
            std::ofstream out(resolve(g, synth_labels));
            if (!out) throw IoError("cannot write " + synth_labels);
            out << "label\n";
            for (auto l : data.labels) out << (l == PointLabel::shape ? "shape" : "noise") << '\n';
        }
    });

    // reduce
    auto* reduce = app.add_subcommand("reduce", "keep one representative per cube with at least k points");
    double red_delta = 0;
    std::size_t red_k = 1;
    std::string red_mode = "center", red_in, red_out, red_sidecar;
    reduce->add_option("--delta", red_delta)->required();
    reduce->add_option("--k", red_k);
    reduce->add_option("--mode", red_mode)->check(CLI::IsMember({"center", "sample"}));
    reduce->add_option("--in", red_in)->required();
    reduce->add_option("--out", red_out)->required();
    reduce->add_option("--sidecar", red_sidecar, "JSON sidecar path (default: <out>.json)");
    reduce->callback([&] {
        const PointCloud cloud = read_points_csv(red_in);
        const ReducedCloud r = rcla_reduce(cloud, ReductionParams{red_delta, red_k, parse_mode(red_mode)});
        const std::string out = resolve(g, red_out);
        write_points_csv(out, r.points);
        write_json(red_sidecar.empty() ? out + ".json" : resolve(g, red_sidecar), to_json(r));
    });

    // autoselect
    auto* autosel = app.add_subcommand("autoselect", "choose (delta, k) from the data");
    AutoSelectConfig auto_cfg;
    std::string auto_in, auto_out;
    autosel->add_option("--in", auto_in)->required();
    autosel->add_option("--out", auto_out, "JSON path (default: stdout)");
    add_auto_options(autosel, auto_cfg);
    autosel->callback([&] { emit(g, auto_out, to_json(auto_select(read_points_csv(auto_in), auto_cfg))); });

    // ph
    auto* ph = app.add_subcommand("ph", "Vietoris-Rips persistence diagrams in degrees 0 and 1");
    std::string ph_in, ph_out, ph_scale = "eps", ph_rows;
    int ph_max_dim = 1;
    double ph_max_scale = infinity;
    ph->add_option("--in", ph_in)->required();
    ph->add_option("--out", ph_out, "JSON path (default: stdout)");
    ph->add_option("--max-dim", ph_max_dim)->check(CLI::Range(0, 1));
    ph->add_option("--max-scale", ph_max_scale);
    ph->add_option("--scale", ph_scale)->check(CLI::IsMember({"eps", "dist"}));
    ph->add_option("--rows", ph_rows, "also write (degree, birth, death) CSV rows");
    ph->callback([&] {
        const FiltrationScale scale = parse_scale(ph_scale);
        const auto ds = vr_persistence(read_points_csv(ph_in), PersistenceOptions{ph_max_dim, ph_max_scale, scale});
        emit(g, ph_out, diagrams_to_json(ds, scale));
        if (!ph_rows.empty()) {
            std::ofstream out(resolve(g, ph_rows));
            if (!out) throw IoError("cannot write " + ph_rows);
            write_diagram_rows(out, ds);
        }
    });

    // bottleneck
    auto* bn = app.add_subcommand("bottleneck", "bottleneck distance between two diagrams");
    std::string bn_a, bn_b;
    int bn_degree = 1;
    bn->add_option("--a", bn_a)->required();
    bn->add_option("--b", bn_b)->required();
    bn->add_option("--degree", bn_degree);
    bn->callback([&] {
        const double d = bottleneck_distance(pick_degree(load_diagrams(bn_a), bn_degree),
                                             pick_degree(load_diagrams(bn_b), bn_degree));
        std::cout << format_double(d) << '\n';
    });

    // features
    auto* feat = app.add_subcommand("features", "summary-statistic feature vector of H0/H1 diagrams");
    std::string feat_in, feat_out;
    double feat_cap = 0;
    std::vector<std::string> feat_drop;
    feat->add_option("--in", feat_in)->required();
    feat->add_option("--cap", feat_cap, "death used for essential bars")->required();
    feat->add_option("--out", feat_out)->required();
    feat->add_option("--drop-stat", feat_drop, "statistic to omit in both degrees");
    feat->callback([&] {
        FeatureVector fv = diagram_features(load_diagrams(feat_in), feat_cap);
        for (const auto& name : feat_drop) fv = drop_statistic(fv, name);
        std::ofstream out(resolve(g, feat_out));
        if (!out) throw IoError("cannot write " + feat_out);
        write_features_csv(out, fv);
    });

    // certificate
    auto* cert = app.add_subcommand("certificate", "stability confidence under Poisson noise");
    double cert_lambda = 0, cert_delta = 0;
    std::int64_t cert_k = 1;
    std::size_t cert_dim = 2;
    std::string cert_counts, cert_out;
    cert->add_option("--lambda", cert_lambda)->required();
    cert->add_option("--delta", cert_delta)->required();
    cert->add_option("--k", cert_k)->required();
    cert->add_option("--dim", cert_dim)->required();
    cert->add_option("--shape-counts", cert_counts, "CSV of shape counts over every cube")->required();
    cert->add_option("--out", cert_out, "JSON path (default: stdout)");
    cert->callback([&] {
        const ShapeOccupancy occ = ShapeOccupancy::from_counts(read_counts_csv(cert_counts));
        emit(g, cert_out, to_json(stability_certificate(occ, cert_lambda, cert_delta, cert_k, cert_dim)));
    });

    // experiment
    auto* exp = app.add_subcommand("experiment", "seeded CLA/RCLA comparison against the clean shape");
    ExperimentSpec spec;
    std::string exp_kind = "circle", exp_scale = "eps", exp_out, exp_curves;
    std::vector<std::string> exp_variants{"cla-auto", "rcla-auto"};
    exp->add_option("--kind", exp_kind)->check(CLI::IsMember({"circle", "two-circles"}));
    exp->add_option("--n", spec.n_shape);
    exp->add_option("--ratios", spec.ratios);
    exp->add_option("--trials", spec.trials);
    exp->add_option("--variants", exp_variants)
        ->check(CLI::IsMember({"cla-fixed", "rcla-fixed", "cla-auto", "rcla-auto"}));
    exp->add_option("--delta", spec.fixed_delta, "delta of the fixed variants");
    exp->add_option("--k", spec.fixed_k, "k of rcla-fixed");
    exp->add_option("--scale", exp_scale)->check(CLI::IsMember({"eps", "dist"}));
    exp->add_option("--out", exp_out, "JSON path (default: stdout)");
    exp->add_option("--curves", exp_curves, "CSV of (ratio, variant, mean, sd) rows");
    add_auto_options(exp, spec.auto_config);
    exp->callback([&] {
        spec.kind = parse_dataset(exp_kind);
        spec.scale = parse_scale(exp_scale);
        spec.seed = g.seed;
        spec.threads = g.threads;
        spec.variants.clear();
        for (const auto& v : exp_variants) spec.variants.push_back(parse_variant(v));
        const ExperimentReport report = run_comparison(spec);
        emit(g, exp_out, to_json(report));
        if (!exp_curves.empty()) {
            std::ofstream out(resolve(g, exp_curves));
            if (!out) throw IoError("cannot write " + exp_curves);
            write_curve_rows(out, report);
        }
    });

    // obj-ingest
    auto* obj = app.add_subcommand("obj-ingest", "read OBJ vertices as a 3-D point cloud");
    ObjIngestOptions obj_opt;
    std::string obj_in, obj_out;
    obj->add_option("--in", obj_in)->required();
    obj->add_option("--out", obj_out)->required();
    obj->add_option("--sample", obj_opt.sample, "uniform subsample size without replacement");
    obj->add_flag("--center-unit", obj_opt.center_unit, "center the bounding box in the unit cube");
    obj->callback([&] {
        obj_opt.seed = g.seed;
        write_points_csv(resolve(g, obj_out), read_obj_vertices(obj_in, obj_opt));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "usage"}}.dump() << '\n';
        return 2;
    } catch (const NoFeasibleCandidate& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "no_feasible_candidate"}, {"reports", to_json(e.reports())}}.dump()
                  << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "failure"}}.dump() << '\n';
        return 1;
    }
    return 0;
}
