#include "tsplab/mars.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

namespace tsplab {

namespace {

// Minimum squared-norm fraction a candidate column must keep after projection
// onto the accepted basis. Besides rejecting outright duplicates, this bounds
// how ill-conditioned the basis can get: marginally independent columns stack
// multiplicatively, and a lax threshold admits bases whose exact least-squares
// coefficients are enormous and cancel only on the training rows.
constexpr double kDependenceTol = 1e-8;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Forward substitution L w = v for lower-triangular L stored as ragged rows.
std::vector<double> solve_lower(const std::vector<std::vector<double>>& L,
                                const std::vector<double>& v) {
    std::vector<double> w(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) {
        double s = v[i];
        for (std::size_t j = 0; j < i; ++j) s -= L[i][j] * w[j];
        w[i] = s / L[i][i];
    }
    return w;
}

/// Least-squares state over the current basis columns: Cholesky factor L of
/// B^T B and z = L^{-1} B^T y, so the residual sum of squares is
/// y^T y - ||z||^2 and appending a column only borders L.
struct BasisFit {
    std::vector<std::vector<double>> cols;
    std::vector<std::vector<double>> L;
    std::vector<double> z;
    double yty = 0.0;
    double sse = 0.0;

    struct Border {
        bool ok = false;
        std::vector<double> w;
        double d = 0.0;
        double znew = 0.0;
    };

    /// Projects u onto the basis extended by `extra` previously accepted
    /// borders (candidate columns not yet committed).
    Border border(const std::vector<double>& u, const std::vector<double>& y,
                  const std::vector<const std::vector<double>*>& extra_cols,
                  const std::vector<Border>& extra) const {
        Border b;
        const double uu = dot(u, u);
        if (uu <= 0.0) return b;

        std::vector<double> v(cols.size() + extra_cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) v[j] = dot(cols[j], u);
        for (std::size_t j = 0; j < extra_cols.size(); ++j)
            v[cols.size() + j] = dot(*extra_cols[j], u);

        b.w.resize(v.size());
        for (std::size_t i = 0; i < L.size(); ++i) {
            double s = v[i];
            for (std::size_t j = 0; j < i; ++j) s -= L[i][j] * b.w[j];
            b.w[i] = s / L[i][i];
        }
        for (std::size_t e = 0; e < extra.size(); ++e) {
            const std::size_t i = L.size() + e;
            double s = v[i];
            for (std::size_t j = 0; j < i; ++j) s -= extra[e].w[j] * b.w[j];
            b.w[i] = s / extra[e].d;
        }

        const double dsq = uu - dot(b.w, b.w);
        if (dsq <= kDependenceTol * uu) return b;
        b.d = std::sqrt(dsq);

        double uy = dot(u, y);
        for (std::size_t j = 0; j < z.size(); ++j) uy -= b.w[j] * z[j];
        for (std::size_t e = 0; e < extra.size(); ++e) uy -= b.w[z.size() + e] * extra[e].znew;
        b.znew = uy / b.d;
        b.ok = true;
        return b;
    }

    void commit(std::vector<double> u, const Border& b) {
        std::vector<double> row = b.w;
        row.push_back(b.d);
        L.push_back(std::move(row));
        z.push_back(b.znew);
        sse -= b.znew * b.znew;
        cols.push_back(std::move(u));
    }
};

struct Candidate {
    int parent = -1;
    int feature = -1;
    double knot = 0.0;
    double reduction = 0.0;
    BasisFit::Border plus;  // parent * max(0, x - knot)
    BasisFit::Border minus; // parent * max(0, knot - x)
};

bool term_uses_feature(const std::vector<HingeFactor>& factors, int feature) {
    for (const HingeFactor& h : factors)
        if (h.feature == feature) return true;
    return false;
}

/// Effective parameter count for the GCV denominator: one per non-intercept
/// term plus three per distinct (feature, knot) pair.
double gcv_cost(const std::vector<int>& subset,
                const std::vector<std::vector<HingeFactor>>& term_factors) {
    std::set<std::pair<int, double>> knots;
    for (int idx : subset)
        for (const HingeFactor& h : term_factors[idx]) knots.emplace(h.feature, h.knot);
    return static_cast<double>(subset.size() - 1) + 3.0 * static_cast<double>(knots.size());
}

// A term whose contribution exceeds this many times the target's RMS can only
// fit the training rows through cancellation against other terms; such models
// predict garbage off the training set, yet their raw SSE looks excellent.
constexpr double kCoefficientCap = 1e6;

/// Residual sum of squares of the least-squares fit restricted to `subset`
/// columns, from the precomputed Gram matrix. Optionally writes coefficients.
/// Returns infinity for subsets that are numerically rank-deficient or whose
/// coefficients blow past kCoefficientCap, so pruning never selects them.
double subset_sse(const std::vector<int>& subset,
                  const std::vector<std::vector<double>>& gram,
                  const std::vector<double>& gy, double yty,
                  std::vector<double>* coefs) {
    const std::size_t m = subset.size();
    std::vector<std::vector<double>> L(m);
    for (std::size_t i = 0; i < m; ++i) {
        L[i].resize(i + 1);
        for (std::size_t j = 0; j <= i; ++j) {
            double s = gram[subset[i]][subset[j]];
            for (std::size_t k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
            if (i == j) {
                if (s <= kDependenceTol * gram[subset[i]][subset[i]])
                    return std::numeric_limits<double>::infinity();
                L[i][i] = std::sqrt(s);
            } else {
                L[i][j] = s / L[j][j];
            }
        }
    }
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = gy[subset[i]];
    std::vector<double> z = solve_lower(L, v);
    const double sse = yty - dot(z, z);
    if (sse < -1e-6 * yty) return std::numeric_limits<double>::infinity();
    std::vector<double> beta(m, 0.0);
    for (int i = static_cast<int>(m) - 1; i >= 0; --i) {
        double s = z[i];
        for (std::size_t j = i + 1; j < m; ++j) s -= L[j][i] * beta[j];
        beta[i] = s / L[i][i];
    }
    const double cap = kCoefficientCap * kCoefficientCap * yty;
    for (std::size_t i = 0; i < m; ++i)
        if (beta[i] * beta[i] * gram[subset[i]][subset[i]] > cap)
            return std::numeric_limits<double>::infinity();
    if (coefs) *coefs = std::move(beta);
    return std::max(sse, 0.0);
}

} // namespace

MarsModel fit_mars(const Dataset& data, int max_terms, int max_degree) {
    if (data.target_kind != TargetKind::regression)
        throw std::invalid_argument("fit_mars: dataset target is not numeric");
    if (data.rows() < 10)
        throw std::invalid_argument("fit_mars: needs at least 10 rows, got " +
                                    std::to_string(data.rows()));
    if (data.cols() < 1) throw std::invalid_argument("fit_mars: dataset has no feature columns");
    if (max_terms < 0) throw std::invalid_argument("fit_mars: max_terms must be >= 0");
    if (max_degree < 1) throw std::invalid_argument("fit_mars: max_degree must be >= 1");

    const int n = data.rows();
    const int p = data.cols();
    const std::vector<double>& y = data.y;

    BasisFit fit;
    fit.yty = dot(y, y);
    fit.sse = fit.yty;
    std::vector<std::vector<HingeFactor>> term_factors;

    {
        std::vector<double> ones(n, 1.0);
        BasisFit::Border b = fit.border(ones, y, {}, {});
        fit.commit(std::move(ones), b);
        term_factors.emplace_back();
    }

    // Noise floor: fits whose residual drops this far below the centred sum
    // of squares are treated as exact, so tied GCV scores prune cleanly.
    const double sse_scale = fit.sse;
    const double sse_floor = 1e-12 * sse_scale;

    std::vector<double> plus_col(n), minus_col(n), values;
    while (static_cast<int>(term_factors.size()) - 1 + 2 <= max_terms &&
           static_cast<int>(fit.cols.size()) + 2 <= n) {
        if (fit.sse <= sse_floor) break;

        Candidate best;
        for (int parent = 0; parent < static_cast<int>(fit.cols.size()); ++parent) {
            if (static_cast<int>(term_factors[parent].size()) >= max_degree) continue;
            const std::vector<double>& pv = fit.cols[parent];
            for (int f = 0; f < p; ++f) {
                if (term_uses_feature(term_factors[parent], f)) continue;
                values.clear();
                for (int i = 0; i < n; ++i)
                    if (pv[i] > 0.0) values.push_back(data.x[i][f]);
                std::sort(values.begin(), values.end());
                values.erase(std::unique(values.begin(), values.end()), values.end());
                for (double t : values) {
                    for (int i = 0; i < n; ++i) {
                        const double dx = data.x[i][f] - t;
                        plus_col[i] = dx > 0.0 ? pv[i] * dx : 0.0;
                        minus_col[i] = dx < 0.0 ? -pv[i] * dx : 0.0;
                    }
                    BasisFit::Border bp = fit.border(plus_col, y, {}, {});
                    BasisFit::Border bm =
                        bp.ok ? fit.border(minus_col, y, {&plus_col}, {bp})
                              : fit.border(minus_col, y, {}, {});
                    double reduction = 0.0;
                    if (bp.ok) reduction += bp.znew * bp.znew;
                    if (bm.ok) reduction += bm.znew * bm.znew;
                    if (reduction > best.reduction) {
                        best.parent = parent;
                        best.feature = f;
                        best.knot = t;
                        best.reduction = reduction;
                        best.plus = bp;
                        best.minus = bm;
                    }
                }
            }
        }

        if (best.parent < 0 || best.reduction < 1e-6 * fit.sse) break;

        // By value: the pushes below may reallocate term_factors.
        const std::vector<HingeFactor> parent_factors = term_factors[best.parent];
        for (int i = 0; i < n; ++i) {
            const double dx = data.x[i][best.feature] - best.knot;
            const double pvi = fit.cols[best.parent][i];
            plus_col[i] = dx > 0.0 ? pvi * dx : 0.0;
            minus_col[i] = dx < 0.0 ? -pvi * dx : 0.0;
        }
        if (best.plus.ok) {
            fit.commit(plus_col, best.plus);
            std::vector<HingeFactor> factors = parent_factors;
            factors.push_back({best.feature, best.knot, 1});
            term_factors.push_back(std::move(factors));
        }
        if (best.minus.ok) {
            fit.commit(minus_col, best.minus);
            std::vector<HingeFactor> factors = parent_factors;
            factors.push_back({best.feature, best.knot, -1});
            term_factors.push_back(std::move(factors));
        }
    }

    // Backward pruning over the committed columns, scored by GCV.
    const std::size_t m = fit.cols.size();
    std::vector<std::vector<double>> gram(m, std::vector<double>(m));
    std::vector<double> gy(m);
    for (std::size_t i = 0; i < m; ++i) {
        gy[i] = dot(fit.cols[i], y);
        for (std::size_t j = 0; j <= i; ++j) gram[i][j] = gram[j][i] = dot(fit.cols[i], fit.cols[j]);
    }

    auto gcv = [&](const std::vector<int>& subset) {
        const double cost = gcv_cost(subset, term_factors);
        if (cost >= n) return std::numeric_limits<double>::infinity();
        double sse = subset_sse(subset, gram, gy, fit.yty, nullptr);
        if (sse <= sse_floor) sse = 0.0;
        const double shrink = 1.0 - cost / n;
        return sse / (n * shrink * shrink);
    };

    std::vector<int> current(m);
    for (std::size_t i = 0; i < m; ++i) current[i] = static_cast<int>(i);
    std::vector<int> best_subset = current;
    double best_gcv = gcv(current);

    while (current.size() > 1) {
        std::size_t drop = 1;
        double drop_gcv = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < current.size(); ++k) {
            std::vector<int> trial = current;
            trial.erase(trial.begin() + k);
            const double g = gcv(trial);
            if (g < drop_gcv) {
                drop_gcv = g;
                drop = k;
            }
        }
        current.erase(current.begin() + drop);
        if (drop_gcv <= best_gcv) {
            best_gcv = drop_gcv;
            best_subset = current;
        }
    }

    std::vector<double> coefs;
    subset_sse(best_subset, gram, gy, fit.yty, &coefs);

    MarsModel model;
    model.columns = data.columns;
    model.intercept = coefs[0];
    for (std::size_t k = 1; k < best_subset.size(); ++k) {
        MarsTerm term;
        term.coef = coefs[k];
        term.factors = term_factors[best_subset[k]];
        model.terms.push_back(std::move(term));
    }
    return model;
}

double predict_mars(const MarsModel& model, const std::vector<double>& x) {
    if (x.size() != model.columns.size())
        throw std::invalid_argument("predict_mars: row width does not match model features");
    double value = model.intercept;
    for (const MarsTerm& term : model.terms) {
        double basis = 1.0;
        for (const HingeFactor& h : term.factors) {
            const double hv = h.dir * (x[h.feature] - h.knot);
            if (hv <= 0.0) {
                basis = 0.0;
                break;
            }
            basis *= hv;
        }
        value += term.coef * basis;
    }
    return value;
}

nlohmann::json to_json(const MarsModel& model) {
    nlohmann::json terms = nlohmann::json::array();
    for (const MarsTerm& term : model.terms) {
        nlohmann::json factors = nlohmann::json::array();
        for (const HingeFactor& h : term.factors)
            factors.push_back({{"feature", model.columns[h.feature]},
                               {"knot", h.knot},
                               {"dir", h.dir}});
        terms.push_back({{"coef", term.coef}, {"factors", std::move(factors)}});
    }
    return nlohmann::json{{"model", "mars"},
                          {"features", model.columns},
                          {"intercept", model.intercept},
                          {"terms", std::move(terms)}};
}

MarsModel mars_from_json(const nlohmann::json& j) {
    if (j.value("model", std::string{}) != "mars")
        throw std::runtime_error("mars JSON: not a mars model");
    MarsModel model;
    model.columns = j.at("features").get<std::vector<std::string>>();
    model.intercept = j.at("intercept").get<double>();
    for (const nlohmann::json& jt : j.at("terms")) {
        MarsTerm term;
        term.coef = jt.at("coef").get<double>();
        for (const nlohmann::json& jf : jt.at("factors")) {
            HingeFactor h;
            const std::string feature = jf.at("feature").get<std::string>();
            const auto it = std::find(model.columns.begin(), model.columns.end(), feature);
            if (it == model.columns.end())
                throw std::runtime_error("mars JSON: unknown feature '" + feature + "'");
            h.feature = static_cast<int>(it - model.columns.begin());
            h.knot = jf.at("knot").get<double>();
            h.dir = jf.at("dir").get<int>();
            if (h.dir != 1 && h.dir != -1)
                throw std::runtime_error("mars JSON: dir must be 1 or -1");
            term.factors.push_back(h);
        }
        model.terms.push_back(std::move(term));
    }
    return model;
}

} // namespace tsplab
