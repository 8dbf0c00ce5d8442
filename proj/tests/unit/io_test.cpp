#include <rcla/experiment.hpp>
#include <rcla/io.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rcla;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "rcla_io_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; }

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST(FormatDouble, RoundTripsAndSpellsInfinity) {
    EXPECT_EQ(format_double(infinity), "inf");
    EXPECT_EQ(format_double(0.1), "0.1");
    Rng rng(90);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform(-20, 20));
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}

TEST(PointsCsv, RoundTrip) {
    Rng rng(91);
    PointCloud c(3);
    for (int i = 0; i < 50; ++i) {
        const double p[3] = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        c.push_back(p);
    }
    const auto path = scratch("points.csv").string();
    write_points_csv(path, c);
    EXPECT_EQ(read_points_csv(path), c);
}

TEST(PointsCsv, Errors) {
    std::istringstream ragged("0,1\n2,3,4\n");
    try {
        parse_points_csv(ragged);
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    std::istringstream junk("0,x\n");
    EXPECT_THROW(parse_points_csv(junk), IoError);
    EXPECT_THROW(read_points_csv(scratch("missing.csv").string() + ".nope"), IoError);
}

TEST(ObjVertices, ParsesVertexLinesOnly) {
    std::istringstream in("# cube\nv 0 0 0\nvn 0 0 1\nv 1.5 2 -3\nvt 0.1 0.2\nf 1 2 3\nv 4 5 6 1.0\n");
    const PointCloud c = parse_obj_vertices(in);
    EXPECT_EQ(c, (PointCloud{{0, 0, 0}, {1.5, 2, -3}, {4, 5, 6}}));
}

TEST(ObjVertices, MalformedLineReportsLineNumber) {
    std::istringstream in("v 0 0 0\n\nv 1 2\n");
    try {
        parse_obj_vertices(in);
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    std::istringstream bad("v 1 2 zz\n");
    EXPECT_THROW(parse_obj_vertices(bad), IoError);
}

TEST(ObjVertices, SamplingAndCentering) {
    const auto path = scratch("mesh.obj");
    std::string text;
    for (int i = 0; i < 20; ++i) text += "v " + std::to_string(i) + " " + std::to_string(2 * i) + " 1\n";
    write_text(path, text);
    EXPECT_EQ(read_obj_vertices(path.string()).size(), 20u);

    ObjIngestOptions opt;
    opt.sample = 5;
    opt.seed = 3;
    const PointCloud a = read_obj_vertices(path.string(), opt), b = read_obj_vertices(path.string(), opt);
    EXPECT_EQ(a, b);
    ASSERT_EQ(a.size(), 5u);
    std::set<double> xs;
    for (std::size_t i = 0; i < a.size(); ++i) xs.insert(a[i][0]);
    EXPECT_EQ(xs.size(), 5u);

    opt.sample = 21;
    EXPECT_THROW(read_obj_vertices(path.string(), opt), std::invalid_argument);

    opt.sample = 0;
    opt.center_unit = true;
    const PointCloud u = read_obj_vertices(path.string(), opt);
    for (std::size_t i = 0; i < u.size(); ++i)
        for (int d = 0; d < 3; ++d) {
            EXPECT_GE(u[i][d], 0.0);
            EXPECT_LE(u[i][d], 1.0);
        }
    // widest axis (y, span 38) fills the cube; the flat z axis sits in the middle
    EXPECT_DOUBLE_EQ(u[0][1], 0.0);
    EXPECT_DOUBLE_EQ(u[19][1], 1.0);
    EXPECT_DOUBLE_EQ(u[0][2], 0.5);
}

TEST(CenterInUnitCube, SmallCloudIsOnlyTranslated) {
    const PointCloud c{{10.0, 10.0}, {10.2, 10.4}};
    const PointCloud u = center_in_unit_cube(c);
    EXPECT_NEAR(u[0][0], 0.4, 1e-12);
    EXPECT_NEAR(u[1][1], 0.7, 1e-12);
    EXPECT_NEAR(distance(u[0], u[1]), distance(c[0], c[1]), 1e-12);
}

TEST(DiagramJson, RoundTrip) {
    const std::vector<PersistenceDiagram> ds{{0, {{0, 0.5}, {0, infinity}}}, {1, {{0.25, 0.75}}}};
    const json j = diagrams_to_json(ds, FiltrationScale::eps);
    EXPECT_EQ(j.at("schema_version"), schema_version);
    EXPECT_EQ(j.at("scale"), "eps");
    const auto path = scratch("diagrams.json").string();
    write_json(path, j);
    const auto back = diagrams_from_json(read_json(path));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].pairs, ds[0].pairs);
    EXPECT_EQ(back[1].pairs, ds[1].pairs);
    EXPECT_EQ(back[1].degree, 1);
    EXPECT_EQ(diagrams_from_json(to_json(ds[1])).front().pairs, ds[1].pairs);
    EXPECT_THROW(diagram_from_json(json{{"degree", 0}, {"pairs", {{0, "never"}}}}), IoError);
}

TEST(DiagramRows, HeaderPlusOneRowPerBar) {
    const std::vector<PersistenceDiagram> ds{{0, {{0, 1}, {0, infinity}}}, {1, {{0.5, 0.7}}}};
    std::ostringstream out;
    write_diagram_rows(out, ds);
    EXPECT_EQ(count_lines(out.str()), 4u);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "degree,birth,death");
    std::istringstream in(out.str());
    const auto back = parse_diagram_rows(in);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].pairs, ds[0].pairs);
    EXPECT_EQ(back[1].pairs, ds[1].pairs);
}

TEST(FeaturesCsv, HeaderRowAndValues) {
    std::ostringstream out;
    write_features_csv(out, diagram_features({}, 1.0));
    EXPECT_EQ(count_lines(out.str()), 2u);
    EXPECT_EQ(out.str().rfind("h0_birth_mean,", 0), 0u);
}

TEST(AutoSelectJson, EveryReportFieldSerialized) {
    CandidateReport r;
    r.delta = 0.1;
    r.rejected = true;
    r.reason = "fewer than n_min representatives";
    AutoSelectResult res{0.1, 2, 0, {r}};
    const json j = to_json(res);
    for (const char* key : {"delta", "M", "Z0", "p_L", "mu_U", "k", "n_reps", "nn_mean", "nn_sd", "beta0", "J",
                            "rejected", "reason"})
        EXPECT_TRUE(j.at("reports")[0].contains(key)) << key;
    EXPECT_TRUE(j.at("reports")[0].at("J").is_null());
}

TEST(Experiment, SingleTrialFlagsDegenerateSd) {
    ExperimentSpec spec;
    spec.n_shape = 200;
    spec.trials = 1;
    spec.seed = 5;
    spec.variants = {Variant::cla_fixed, Variant::rcla_fixed};
    spec.fixed_delta = 0.03;
    spec.fixed_k = 2;
    const ExperimentReport r = run_comparison(spec);
    ASSERT_EQ(r.results.size(), 2u);
    for (const auto& c : r.results) {
        EXPECT_EQ(c.sd, 0.0);
        EXPECT_TRUE(c.sd_degenerate);
        ASSERT_EQ(c.trials.size(), 1u);
        EXPECT_TRUE(c.trials[0].ok) << c.trials[0].error;
        EXPECT_EQ(c.mean, c.trials[0].distance);
    }
    EXPECT_EQ(r.at(Variant::cla_fixed, 0.10).trials[0].k, 1);
    EXPECT_EQ(r.at(Variant::rcla_fixed, 0.10).trials[0].k, 2);
    EXPECT_THROW(r.at(Variant::cla_auto, 0.10), std::out_of_range);
}

TEST(Experiment, AggregatesAreConsistentAndDeterministic) {
    ExperimentSpec spec;
    spec.kind = DatasetKind::two_circles;
    spec.n_shape = 150;
    spec.trials = 3;
    spec.ratios = {0.05, 0.2};
    spec.seed = 6;
    spec.variants = {Variant::cla_fixed, Variant::rcla_fixed};
    spec.fixed_delta = 0.04;
    spec.fixed_k = 2;
    const ExperimentReport a = run_comparison(spec);
    ASSERT_EQ(a.results.size(), 4u);
    for (const auto& c : a.results) {
        std::vector<double> d;
        for (const auto& t : c.trials)
            if (t.ok) d.push_back(t.distance);
        EXPECT_EQ(c.failures, c.trials.size() - d.size());
        EXPECT_NEAR(c.mean, mean_of(d), 1e-12);
        EXPECT_NEAR(c.sd, sample_sd(d), 1e-12);
    }
    spec.threads = 3;
    ExperimentReport b = run_comparison(spec);
    b.seconds = a.seconds;
    b.spec.threads = a.spec.threads;
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());

    std::ostringstream curves;
    write_curve_rows(curves, a);
    EXPECT_EQ(count_lines(curves.str()), 5u);
}

TEST(Experiment, VariantAndDatasetNames) {
    for (auto v : {Variant::cla_fixed, Variant::rcla_fixed, Variant::cla_auto, Variant::rcla_auto})
        EXPECT_EQ(parse_variant(to_string(v)), v);
    EXPECT_EQ(parse_dataset("two-circles"), DatasetKind::two_circles);
    EXPECT_THROW(parse_variant("rcla"), std::invalid_argument);
    EXPECT_THROW(parse_dataset("torus"), std::invalid_argument);
    ExperimentSpec spec;
    spec.ratios = {0.0};
    EXPECT_THROW(spec.validate(), std::invalid_argument);
}
