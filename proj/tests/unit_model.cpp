#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "tsplab/dataset.hpp"
#include "tsplab/mars.hpp"
#include "tsplab/rng.hpp"
#include "tsplab/stats.hpp"
#include "tsplab/tree.hpp"
#include "tsplab/validation.hpp"

using namespace tsplab;

namespace {

Dataset regression_data(std::vector<std::string> columns, std::vector<std::vector<double>> x,
                        std::vector<double> y) {
    Dataset d;
    d.columns = std::move(columns);
    d.x = std::move(x);
    d.y = std::move(y);
    d.target_kind = TargetKind::regression;
    return d;
}

Dataset classification_data(std::vector<std::string> columns,
                            std::vector<std::vector<double>> x, std::vector<double> y,
                            std::vector<std::string> classes) {
    Dataset d;
    d.columns = std::move(columns);
    d.x = std::move(x);
    d.y = std::move(y);
    d.target_kind = TargetKind::classification;
    d.class_names = std::move(classes);
    return d;
}

/// Rows over a uniform grid on [0, 1] with y = f(x).
template <typename F>
Dataset curve_data(int n, F f) {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < n; ++i) {
        const double v = static_cast<double>(i) / n;
        x.push_back({v});
        y.push_back(f(v));
    }
    return regression_data({"x"}, std::move(x), std::move(y));
}

double rmse_on(const MarsModel& model, const Dataset& data) {
    double acc = 0.0;
    for (int i = 0; i < data.rows(); ++i) {
        const double e = predict_mars(model, data.x[i]) - data.y[i];
        acc += e * e;
    }
    return std::sqrt(acc / data.rows());
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("a depth-1 tree separates a threshold rule") {
    Dataset d = classification_data(
        {"f"}, {{0.1}, {0.2}, {0.3}, {0.7}, {0.8}, {0.9}}, {0, 0, 0, 1, 1, 1}, {"lo", "hi"});
    const DecisionTree tree = fit_tree(d, 1, 1);
    for (int i = 0; i < d.rows(); ++i)
        CHECK(predict_tree(tree, d.x[i]) == static_cast<int>(d.y[i]));
    CHECK(predict_tree_label(tree, {0.0}) == "lo");
    CHECK(predict_tree_label(tree, {1.0}) == "hi");
}

TEST_CASE("a depth-2 tree solves xor via a zero-gain first split") {
    Dataset d = classification_data({"a", "b"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}},
                                    {0, 1, 1, 0}, {"even", "odd"});
    const DecisionTree tree = fit_tree(d, 2, 1);
    for (int i = 0; i < d.rows(); ++i)
        CHECK(predict_tree(tree, d.x[i]) == static_cast<int>(d.y[i]));
}

TEST_CASE("tree constraints and validation") {
    Dataset d = classification_data(
        {"f"}, {{0.1}, {0.2}, {0.3}, {0.7}, {0.8}, {0.9}}, {0, 0, 0, 1, 1, 1}, {"lo", "hi"});

    const DecisionTree stump = fit_tree(d, 0, 1);
    CHECK(predict_tree(stump, {0.1}) == predict_tree(stump, {0.9}));

    // min_leaf 3 still allows the balanced 3/3 split.
    const DecisionTree balanced = fit_tree(d, 1, 3);
    CHECK(predict_tree(balanced, {0.1}) != predict_tree(balanced, {0.9}));
    // min_leaf 4 forbids every split of six rows.
    const DecisionTree forced_leaf = fit_tree(d, 3, 4);
    CHECK(predict_tree(forced_leaf, {0.1}) == predict_tree(forced_leaf, {0.9}));

    Dataset reg = curve_data(12, [](double v) { return v; });
    CHECK_THROWS_AS((void)fit_tree(reg, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)fit_tree(d, -1, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)fit_tree(d, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)predict_tree(fit_tree(d, 1, 1), {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("tree json round-trip preserves predictions") {
    RngStream rng(3);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        const double a = rng.uniform();
        const double b = rng.uniform();
        x.push_back({a, b});
        y.push_back(a + b > 0.9 ? 1.0 : 0.0);
    }
    Dataset d = classification_data({"a", "b"}, std::move(x), std::move(y), {"in", "out"});
    const DecisionTree tree = fit_tree(d, 4, 1);
    const DecisionTree back = tree_from_json(to_json(tree));
    for (int i = 0; i < d.rows(); ++i) CHECK(predict_tree(back, d.x[i]) == predict_tree(tree, d.x[i]));
    CHECK_THROWS(tree_from_json(nlohmann::json{{"model", "mars"}}));
}

TEST_CASE("mars recovers a single hinge") {
    Dataset d = curve_data(100, [](double v) { return std::max(0.0, v - 0.5); });
    const MarsModel model = fit_mars(d, 20, 2);

    REQUIRE(model.terms.size() == 1);
    REQUIRE(model.terms[0].factors.size() == 1);
    CHECK(model.terms[0].factors[0].feature == 0);
    CHECK(model.terms[0].factors[0].dir == 1);
    CHECK(model.terms[0].factors[0].knot == doctest::Approx(0.5).epsilon(0.02));
    CHECK(model.terms[0].coef == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rmse_on(model, d) < 1e-8);
}

TEST_CASE("mars reconstructs a line from a reflected pair") {
    Dataset d = curve_data(60, [](double v) { return 3.0 * v - 1.0; });
    const MarsModel model = fit_mars(d, 20, 2);
    CHECK(rmse_on(model, d) < 1e-7);
    for (const MarsTerm& term : model.terms) REQUIRE(term.factors.size() == 1);
}

TEST_CASE("mars handles interactions within the degree budget") {
    RngStream rng(5);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 120; ++i) {
        const double a = rng.uniform();
        const double b = rng.uniform();
        const double c = rng.uniform();
        x.push_back({a, b, c});
        y.push_back(2.0 * std::max(0.0, a - 0.3) * std::max(0.0, b - 0.2) + 0.5 * c);
    }
    Dataset d = regression_data({"a", "b", "c"}, std::move(x), std::move(y));
    const MarsModel model = fit_mars(d, 25, 2);

    CHECK(rmse_on(model, d) < 0.05);
    for (const MarsTerm& term : model.terms) {
        CHECK(term.factors.size() <= 2);
        std::set<int> used;
        for (const HingeFactor& h : term.factors) used.insert(h.feature);
        CHECK(used.size() == term.factors.size()); // no feature twice in a term
    }

    const MarsModel additive = fit_mars(d, 25, 1);
    for (const MarsTerm& term : additive.terms) CHECK(term.factors.size() == 1);
}

TEST_CASE("mars degenerates to the intercept on constant targets") {
    Dataset d = curve_data(30, [](double) { return 2.5; });
    const MarsModel model = fit_mars(d, 10, 2);
    CHECK(model.terms.empty());
    CHECK(model.intercept == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("mars stays stable on nearly collinear scale-mixed features") {
    // Clones of two latent variables, shifted by tiny per-clone noise and
    // spread over seven orders of magnitude, drive the normal equations
    // toward rank deficiency. The fit must still generalize instead of
    // balancing huge coefficients that cancel only on the training rows.
    const int p = 20;
    std::vector<std::string> columns;
    for (int j = 0; j < p; ++j) columns.push_back("f" + std::to_string(j));
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        RngStream rng(seed);
        const auto draw = [&](int n) {
            std::vector<std::vector<double>> x;
            std::vector<double> y;
            for (int r = 0; r < n; ++r) {
                const double t = rng.uniform();
                const double s = rng.uniform();
                std::vector<double> row(p);
                for (int j = 0; j < p; ++j) {
                    const double scale = std::pow(10.0, j % 7 - 3);
                    row[j] = scale * ((j % 2 ? t : s) + 3e-6 * (rng.uniform() - 0.5));
                }
                x.push_back(std::move(row));
                y.push_back(std::max(0.0, t - 0.5) + 0.5 * std::max(0.0, 0.4 - s) +
                            0.01 * (rng.uniform() - 0.5));
            }
            return regression_data(columns, std::move(x), std::move(y));
        };
        const Dataset train = draw(150);
        const Dataset fresh = draw(150);
        const MarsModel model = fit_mars(train, 25, 2);

        double yy = 0.0;
        for (double v : train.y) yy += v * v;
        const double y_rms = std::sqrt(yy / train.rows());
        for (const MarsTerm& term : model.terms) {
            double bb = 0.0;
            for (const auto& row : train.x) {
                double basis = 1.0;
                for (const HingeFactor& h : term.factors)
                    basis *= std::max(0.0, h.dir * (row[h.feature] - h.knot));
                bb += basis * basis;
            }
            const double contribution = std::fabs(term.coef) * std::sqrt(bb / train.rows());
            CHECK(contribution <= 1e6 * y_rms);
        }
        CHECK(std::isfinite(rmse_on(model, fresh)));
        CHECK(rmse_on(model, fresh) < 1.0);
    }
}

TEST_CASE("mars validates its inputs") {
    Dataset d = curve_data(9, [](double v) { return v; });
    CHECK_THROWS_AS((void)fit_mars(d, 10, 2), std::invalid_argument);

    Dataset cls = classification_data({"f"}, {{0.0}, {1.0}}, {0, 1}, {"a", "b"});
    CHECK_THROWS_AS((void)fit_mars(cls, 10, 2), std::invalid_argument);

    Dataset ok = curve_data(20, [](double v) { return v; });
    CHECK_THROWS_AS((void)fit_mars(ok, -1, 2), std::invalid_argument);
    CHECK_THROWS_AS((void)fit_mars(ok, 10, 0), std::invalid_argument);

    const MarsModel model = fit_mars(ok, 10, 2);
    CHECK_THROWS_AS((void)predict_mars(model, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("mars json round-trip preserves predictions") {
    RngStream rng(7);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 50; ++i) {
        const double a = rng.uniform();
        const double b = rng.uniform();
        x.push_back({a, b});
        y.push_back(std::max(0.0, a - 0.4) - 2.0 * std::max(0.0, 0.6 - b));
    }
    Dataset d = regression_data({"a", "b"}, std::move(x), std::move(y));
    const MarsModel model = fit_mars(d, 15, 2);
    const MarsModel back = mars_from_json(to_json(model));
    for (int i = 0; i < d.rows(); ++i)
        CHECK(predict_mars(back, d.x[i]) == predict_mars(model, d.x[i]));
    CHECK(back.columns == model.columns);
    CHECK_THROWS(mars_from_json(nlohmann::json{{"model", "tree"}}));
}

TEST_CASE("cross_validate partitions rows into k folds") {
    RngStream rng(11);
    Dataset d = curve_data(23, [](double v) { return v; });

    int covered = 0;
    FoldEvaluator count_rows = [&](const Dataset& train, const Dataset& test) {
        CHECK(train.rows() + test.rows() == 23);
        covered += test.rows();
        return static_cast<double>(test.rows());
    };
    const CvResult r = cross_validate(d, count_rows, 5, rng);
    REQUIRE(r.fold_metrics.size() == 5);
    CHECK(covered == 23);
    for (double m : r.fold_metrics) CHECK(m >= 4.0);

    RngStream r2(11);
    CHECK_THROWS_AS((void)cross_validate(d, count_rows, 1, r2), std::invalid_argument);
    CHECK_THROWS_AS((void)cross_validate(d, count_rows, 24, r2), std::invalid_argument);
}

TEST_CASE("classification folds are stratified") {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        x.push_back({static_cast<double>(i)});
        y.push_back(i < 30 ? 0.0 : 1.0);
    }
    Dataset d = classification_data({"f"}, std::move(x), std::move(y), {"big", "small"});

    RngStream rng(13);
    FoldEvaluator minority_share = [](const Dataset&, const Dataset& test) {
        int minority = 0;
        for (double v : test.y)
            if (v == 1.0) ++minority;
        return static_cast<double>(minority);
    };
    const CvResult r = cross_validate(d, minority_share, 5, rng);
    for (double m : r.fold_metrics) CHECK(m == 2.0); // 10 minority rows over 5 folds
}

TEST_CASE("bundled evaluators fit their models") {
    RngStream rng(17);
    std::vector<std::vector<double>> cx;
    std::vector<double> cy;
    // A margin around 0.5 keeps every midpoint split inside the gap, so the
    // held-out fold is classified perfectly no matter how the rows are dealt.
    for (int i = 0; i < 30; ++i) {
        const bool hi = i >= 15;
        const double v = hi ? 0.6 + 0.4 * (i - 15) / 14.0 : 0.4 * i / 14.0;
        cx.push_back({v});
        cy.push_back(hi ? 1.0 : 0.0);
    }
    Dataset cls = classification_data({"f"}, std::move(cx), std::move(cy), {"lo", "hi"});
    RngStream r1 = rng.child(1);
    const CvResult acc = cross_validate(cls, tree_accuracy(2, 1), 5, r1);
    CHECK(acc.mean_metric == doctest::Approx(1.0));

    Dataset reg = curve_data(40, [](double v) { return std::max(0.0, v - 0.25); });
    RngStream r2 = rng.child(2);
    const CvResult fit = cross_validate(reg, mars_rmse(15, 2), 5, r2);
    RngStream r3 = rng.child(2);
    const CvResult base = cross_validate(reg, mean_predictor_rmse(), 5, r3);
    CHECK(fit.mean_metric < 0.25 * base.mean_metric);

    Dataset flat = curve_data(20, [](double) { return 1.0; });
    RngStream r4 = rng.child(3);
    CHECK(cross_validate(flat, mean_predictor_rmse(), 4, r4).mean_metric == 0.0);
}

TEST_CASE("forward selection finds planted features") {
    RngStream rng(19);
    const std::vector<std::string> names{"n0", "sig_a", "n1", "n2", "sig_b", "n3", "n4", "n5"};
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 80; ++i) {
        std::vector<double> row(names.size());
        for (double& v : row) v = rng.uniform();
        y.push_back(2.0 * row[1] - 1.5 * row[4]);
        x.push_back(std::move(row));
    }
    Dataset d = regression_data(names, std::move(x), std::move(y));

    FsConfig cfg;
    cfg.outer_k = 5;
    cfg.mars_max_terms = 7;
    cfg.max_features = 4;
    RngStream srng(23);
    const SelectionTrace trace = forward_feature_selection(d, cfg, srng);

    REQUIRE(trace.steps.size() >= 3);
    CHECK(trace.steps[0].feature.empty());
    for (std::size_t s = 1; s < trace.steps.size(); ++s)
        CHECK(trace.steps[s].inner_rmse <= trace.steps[s - 1].inner_rmse + 1e-12);

    const std::set<std::string> final_set(trace.final_features.begin(),
                                          trace.final_features.end());
    CHECK(final_set.count("sig_a") == 1);
    CHECK(final_set.count("sig_b") == 1);
    CHECK(trace.outer_fold_rmse.size() == 5);
    CHECK(trace.outer_rmse < 0.2);
    CHECK(trace.fold_selections.size() == 5);

    const nlohmann::json j = to_json(trace);
    CHECK(j.at("steps").size() == trace.steps.size());
    CHECK(j.at("outer_rmse").get<double>() == trace.outer_rmse);
}

TEST_CASE("forward selection validates its inputs") {
    Dataset d = curve_data(14, [](double v) { return v; });
    FsConfig cfg;
    RngStream rng(29);
    CHECK_THROWS_AS((void)forward_feature_selection(d, cfg, rng), std::invalid_argument);

    Dataset cls = classification_data({"f"}, {{0.0}, {1.0}}, {0, 1}, {"a", "b"});
    CHECK_THROWS_AS((void)forward_feature_selection(cls, cfg, rng), std::invalid_argument);

    Dataset ok = curve_data(20, [](double v) { return v; });
    cfg.outer_k = 25;
    CHECK_THROWS_AS((void)forward_feature_selection(ok, cfg, rng), std::invalid_argument);
}

TEST_CASE("partial dependence averages the model over the data") {
    // Model depending only on feature g: the curve is flat at the weighted
    // average, which for a linear model equals the plain prediction mean.
    MarsModel on_g;
    on_g.columns = {"f", "g"};
    on_g.intercept = 1.0;
    on_g.terms.push_back({2.0, {HingeFactor{1, 0.0, 1}}});

    Dataset d = regression_data({"f", "g"},
                                {{0.1, 0.2}, {0.5, 0.4}, {0.9, 0.8}}, {0, 0, 0});
    const std::vector<double> grid{0.0, 0.5, 1.0};
    const auto curve = weighted_partial_dependence(on_g, d, "f", grid);
    REQUIRE(curve.size() == 3);
    for (const PdpPoint& p : curve) REQUIRE(p.defined);

    // Recompute the weighted average by the definition.
    std::vector<double> fvals{0.1, 0.5, 0.9};
    const double alpha = sample_sd(fvals) / 4.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double wsum = 0.0, msum = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double t = fvals[i] - grid[g];
            const double w = alpha * std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
            wsum += w;
            msum += w * (1.0 + 2.0 * d.x[i][1]);
        }
        CHECK(curve[g].value == doctest::Approx(msum / wsum).epsilon(1e-12));
        CHECK(curve[g].x == grid[g]);
    }

    // Model depending only on the swept feature: overriding makes the curve
    // exactly the model's own section, independent of the weights.
    MarsModel on_f;
    on_f.columns = {"f", "g"};
    on_f.intercept = 0.5;
    on_f.terms.push_back({3.0, {HingeFactor{0, 0.25, 1}}});
    const auto section = weighted_partial_dependence(on_f, d, "f", grid);
    for (std::size_t g = 0; g < grid.size(); ++g)
        CHECK(section[g].value ==
              doctest::Approx(0.5 + 3.0 * std::max(0.0, grid[g] - 0.25)).epsilon(1e-12));
}

TEST_CASE("partial dependence stays defined without feature spread") {
    MarsModel model;
    model.columns = {"f"};
    model.intercept = 2.0;
    Dataset d = regression_data({"f"}, {{0.3}, {0.3}, {0.3}}, {0, 0, 0});
    const auto curve = weighted_partial_dependence(model, d, "f", {0.0, 10.0});
    for (const PdpPoint& p : curve) {
        CHECK(p.defined);
        CHECK(p.value == doctest::Approx(2.0));
    }

    CHECK_THROWS_AS(
        (void)weighted_partial_dependence(model, d, "missing", {0.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)weighted_partial_dependence(model, d, "f", {}), std::invalid_argument);
}

} // TEST_SUITE("model")
