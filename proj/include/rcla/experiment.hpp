#pragma once

#include <rcla/autoselect.hpp>
#include <rcla/bottleneck.hpp>
#include <rcla/io.hpp>
#include <rcla/persistence.hpp>
#include <rcla/reduction.hpp>
#include <rcla/stats.hpp>
#include <rcla/synth.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rcla {

enum class DatasetKind { circle, two_circles };

/// {CLA, RCLA} x {fixed (delta, k), automatic selection}
enum class Variant { cla_fixed, rcla_fixed, cla_auto, rcla_auto };

inline std::string to_string(Variant v) {
    switch (v) {
    case Variant::cla_fixed: return "cla-fixed";
    case Variant::rcla_fixed: return "rcla-fixed";
    case Variant::cla_auto: return "cla-auto";
    case Variant::rcla_auto: return "rcla-auto";
    }
    return "?";
}

inline Variant parse_variant(const std::string& s) {
    for (auto v : {Variant::cla_fixed, Variant::rcla_fixed, Variant::cla_auto, Variant::rcla_auto})
        if (to_string(v) == s) return v;
    throw std::invalid_argument("unknown variant: " + s);
}

inline std::string to_string(DatasetKind k) { return k == DatasetKind::circle ? "circle" : "two-circles"; }

inline DatasetKind parse_dataset(const std::string& s) {
    if (s == "circle") return DatasetKind::circle;
    if (s == "two-circles") return DatasetKind::two_circles;
    throw std::invalid_argument("unknown dataset kind: " + s);
}

struct ExperimentSpec {
    DatasetKind kind = DatasetKind::circle;
    std::size_t n_shape = 1000;
    std::vector<double> ratios{0.10};
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    std::vector<Variant> variants{Variant::cla_auto, Variant::rcla_auto};

    double fixed_delta = 0.02; ///< used by the *-fixed variants
    std::size_t fixed_k = 3;   ///< used by rcla-fixed
    AutoSelectConfig auto_config{};
    /// Convention the reported bottleneck distances are measured in.
    FiltrationScale scale = FiltrationScale::eps;
    Circle circle{};
    TwoCircleGeometry two_circles{};
    unsigned threads = 1;

    void validate() const {
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (n_shape < 1) throw std::invalid_argument("n_shape must be >= 1");
        if (ratios.empty()) throw std::invalid_argument("no noise ratios given");
        for (double r : ratios)
            if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("noise ratios must lie in (0, 1]");
        if (variants.empty()) throw std::invalid_argument("no pipeline variants given");
        if (!(fixed_delta > 0.0)) throw std::invalid_argument("fixed delta must be positive");
        if (fixed_k < 1) throw std::invalid_argument("fixed k must be >= 1");
        auto_config.validate();
    }
};

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double distance = 0.0;
    double delta = 0.0;
    std::int64_t k = 0;
    std::size_t n_output = 0;
};

struct CellResult {
    Variant variant{};
    double ratio = 0.0;
    std::vector<TrialRecord> trials;
    double mean = 0.0;
    double sd = 0.0;
    std::size_t failures = 0;
    bool sd_degenerate = false; ///< fewer than two successful trials

    void aggregate() {
        std::vector<double> ok;
        failures = 0;
        for (const auto& t : trials) {
            if (t.ok)
                ok.push_back(t.distance);
            else
                ++failures;
        }
        mean = mean_of(ok);
        sd = sample_sd(ok);
        sd_degenerate = ok.size() < 2;
    }
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<CellResult> results; ///< ratio-major, variant-minor
    double seconds = 0.0;

    const CellResult& at(Variant v, double ratio) const {
        for (const auto& c : results)
            if (c.variant == v && c.ratio == ratio) return c;
        throw std::out_of_range("no such (variant, ratio) in report");
    }
};

inline PointCloud sample_shape(const ExperimentSpec& spec, Rng& rng) {
    if (spec.kind == DatasetKind::circle) return sample_circle(spec.n_shape, spec.circle, rng);
    return sample_two_circles(spec.n_shape, rng, spec.two_circles);
}

inline PersistenceDiagram h1_diagram(const PointCloud& cloud, FiltrationScale scale) {
    PersistenceOptions opt;
    opt.scale = scale;
    return vr_persistence(cloud, opt).at(1);
}

namespace detail {

inline std::vector<TrialRecord> run_trial(const ExperimentSpec& spec, std::size_t ratio_index, std::size_t trial) {
    const double r = spec.ratios[ratio_index];
    const std::uint64_t seed = derive_seed(spec.seed, ratio_index, trial);
    std::vector<TrialRecord> out(spec.variants.size());
    for (auto& rec : out) {
        rec.trial = trial;
        rec.seed = seed;
    }
    try {
        Rng rng(seed);
        const PointCloud shape = sample_shape(spec, rng);
        const LabeledCloud data = make_noisy_dataset(shape, r, Box::unit(2), rng);
        const PersistenceDiagram clean = h1_diagram(shape, spec.scale);

        std::optional<AutoSelectResult> chosen;
        for (std::size_t v = 0; v < spec.variants.size(); ++v) {
            TrialRecord& rec = out[v];
            try {
                const Variant variant = spec.variants[v];
                const bool automatic = variant == Variant::cla_auto || variant == Variant::rcla_auto;
                if (automatic && !chosen) chosen = auto_select(data.points, spec.auto_config);
                rec.delta = automatic ? chosen->delta_star : spec.fixed_delta;
                if (variant == Variant::cla_auto || variant == Variant::cla_fixed)
                    rec.k = 1;
                else
                    rec.k = automatic ? chosen->k_star : static_cast<std::int64_t>(spec.fixed_k);

                const ReducedCloud reduced = rcla_reduce(
                    data.points, ReductionParams{rec.delta, static_cast<std::size_t>(rec.k), Representative::center});
                rec.n_output = reduced.points.size();
                if (reduced.points.empty()) throw std::runtime_error("reduction produced no points");
                rec.distance = bottleneck_distance(clean, h1_diagram(reduced.points, spec.scale));
                rec.ok = std::isfinite(rec.distance);
                if (!rec.ok) rec.error = "infinite bottleneck distance";
            } catch (const std::exception& e) {
                rec.ok = false;
                rec.error = e.what();
            }
        }
    } catch (const std::exception& e) {
        for (auto& rec : out) {
            rec.ok = false;
            rec.error = e.what();
        }
    }
    return out;
}

} // namespace detail

/// Seeded CLA/RCLA comparison against the clean-shape H1 diagram. Trials can run on several
/// threads; every result lands in a fixed slot, so the report does not depend on scheduling.
inline ExperimentReport run_comparison(const ExperimentSpec& spec) {
    spec.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t nr = spec.ratios.size();
    const std::size_t nt = spec.trials;
    std::vector<std::vector<TrialRecord>> slots(nr * nt);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < slots.size(); task = next++)
            slots[task] = detail::run_trial(spec, task / nt, task % nt);
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(slots.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ExperimentReport report;
    report.spec = spec;
    for (std::size_t ri = 0; ri < nr; ++ri)
        for (std::size_t v = 0; v < spec.variants.size(); ++v) {
            CellResult cell;
            cell.variant = spec.variants[v];
            cell.ratio = spec.ratios[ri];
            for (std::size_t t = 0; t < nt; ++t) cell.trials.push_back(slots[ri * nt + t][v]);
            cell.aggregate();
            report.results.push_back(std::move(cell));
        }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

inline json to_json(const ExperimentReport& report) {
    const ExperimentSpec& s = report.spec;
    json variants = json::array();
    for (auto v : s.variants) variants.push_back(to_string(v));
    json results = json::array();
    for (const auto& c : report.results) {
        json trials = json::array();
        for (const auto& t : c.trials) {
            json jt{{"trial", t.trial}, {"seed", t.seed}, {"ok", t.ok}, {"delta", t.delta}, {"k", t.k},
                    {"n_output", t.n_output}};
            if (t.ok)
                jt["distance"] = t.distance;
            else
                jt["error"] = t.error;
            trials.push_back(jt);
        }
        results.push_back({{"variant", to_string(c.variant)}, {"ratio", c.ratio}, {"mean", c.mean}, {"sd", c.sd},
                           {"failures", c.failures}, {"sd_degenerate", c.sd_degenerate}, {"trials", trials}});
    }
    return {{"schema_version", schema_version},
            {"dataset", to_string(s.kind)},
            {"n_shape", s.n_shape},
            {"ratios", s.ratios},
            {"trials", s.trials},
            {"seed", s.seed},
            {"variants", variants},
            {"scale", s.scale == FiltrationScale::eps ? "eps" : "dist"},
            {"seconds", report.seconds},
            {"results", results}};
}

/// (ratio, variant, mean, sd) rows with a header.
inline void write_curve_rows(std::ostream& out, const ExperimentReport& report) {
    out << "ratio,variant,mean,sd\n";
    for (const auto& c : report.results)
        out << format_double(c.ratio) << ',' << to_string(c.variant) << ',' << format_double(c.mean) << ','
            << format_double(c.sd) << '\n';
}

} // namespace rcla
