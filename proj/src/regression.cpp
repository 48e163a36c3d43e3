#include "pumpstudy/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "pumpstudy/errors.hpp"

namespace pumpstudy {

std::vector<double> standardize(const std::vector<double>& x, const std::string& name) {
    const std::size_t n = x.size();
    if (n < 2) throw DegenerateError("cannot standardize '" + name + "': fewer than 2 values");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw DegenerateError("zero variance in regressor '" + name + "'");
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = (x[i] - mean) / sd;
    return z;
}

namespace {

double two_sided_p(double t, int dof) {
    if (!std::isfinite(t)) return 0.0;
    boost::math::students_t dist(static_cast<double>(dof));
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

}  // namespace

RegressionResult ols(const std::vector<double>& y, const std::vector<std::vector<double>>& columns,
                     std::vector<std::string> term_names, bool robust_se) {
    const std::size_t n = y.size();
    const std::size_t k = columns.size();
    if (k == 0) throw DegenerateError("empty design matrix");
    for (const auto& c : columns) {
        if (c.size() != n) throw DegenerateError("design column length mismatch");
    }
    if (n <= k) throw DataError("need more observations than terms: n=" + std::to_string(n) +
                                ", k=" + std::to_string(k));
    if (term_names.empty()) {
        term_names.resize(k);
        for (std::size_t j = 0; j < k; ++j) term_names[j] = "x" + std::to_string(j);
    }

    Eigen::MatrixXd X(n, k);
    Eigen::VectorXd Y(n);
    for (std::size_t i = 0; i < n; ++i) Y(static_cast<Eigen::Index>(i)) = y[i];
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns[j][i];

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    if (rank < static_cast<Eigen::Index>(k)) {
        const auto perm = qr.colsPermutation().indices();
        std::string bad;
        for (Eigen::Index j = rank; j < static_cast<Eigen::Index>(k); ++j) {
            if (!bad.empty()) bad += ", ";
            bad += term_names[static_cast<std::size_t>(perm(j))];
        }
        throw DegenerateError("rank-deficient design; collinear columns: " + bad);
    }

    const Eigen::VectorXd beta = qr.solve(Y);
    const Eigen::VectorXd resid = Y - X * beta;
    const double rss = resid.squaredNorm();
    const int dof = static_cast<int>(n - k);
    const double s2 = rss / dof;

    // (X'X)^-1 through the R factor of the pivoted QR: X P = Q R.
    const Eigen::MatrixXd R =
        qr.matrixR().topLeftCorner(rank, rank).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv = R.inverse();
    const Eigen::MatrixXd xtx_inv_perm = Rinv * Rinv.transpose();
    const Eigen::MatrixXd P = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = P * xtx_inv_perm * P.transpose();

    Eigen::VectorXd var(k);
    if (!robust_se) {
        var = s2 * xtx_inv.diagonal();
    } else {
        // HC1: (X'X)^-1 X' diag(e^2) X (X'X)^-1 scaled by n/(n-k).
        Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = X.row(static_cast<Eigen::Index>(i));
            meat += resid(static_cast<Eigen::Index>(i)) * resid(static_cast<Eigen::Index>(i)) *
                    xi.transpose() * xi;
        }
        const Eigen::MatrixXd cov =
            xtx_inv * meat * xtx_inv * (static_cast<double>(n) / dof);
        var = cov.diagonal();
    }

    const double ymean = Y.mean();
    const double tss = (Y.array() - ymean).matrix().squaredNorm();
    double r2;
    if (tss > 0.0) {
        r2 = 1.0 - rss / tss;
    } else {
        r2 = rss == 0.0 ? 1.0 : 0.0;
    }

    RegressionResult res;
    res.terms = std::move(term_names);
    res.n = static_cast<int>(n);
    res.r2 = r2;
    res.adj_r2 = 1.0 - (1.0 - r2) * (static_cast<double>(n) - 1.0) / dof;
    res.coefficients.resize(k);
    res.standard_errors.resize(k);
    res.t_stats.resize(k);
    res.p_values.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double b = beta(static_cast<Eigen::Index>(j));
        const double se = std::sqrt(std::max(0.0, var(static_cast<Eigen::Index>(j))));
        res.coefficients[j] = b;
        res.standard_errors[j] = se;
        const double t = se > 0.0 ? b / se
                                  : (b == 0.0 ? 0.0
                                              : std::numeric_limits<double>::infinity() *
                                                    (b > 0 ? 1.0 : -1.0));
        res.t_stats[j] = t;
        res.p_values[j] = se > 0.0 ? two_sided_p(t, dof) : (b == 0.0 ? 1.0 : 0.0);
    }
    return res;
}

std::string significance_stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.10) return "*";
    return "";
}

std::string var_kind_name(VarKind k) {
    switch (k) {
        case VarKind::CAT: return "CAT";
        case VarKind::CAR: return "CAR";
        case VarKind::CAV: return "CAV";
    }
    return "?";
}

std::string term_label(VarKind k, RelativeWindow w) {
    return var_kind_name(k) + "(" + std::to_string(w.tau1) + "," + std::to_string(w.tau2) + ")";
}

std::array<RegressionSpec, 5> table3_specs(StandardizePolicy policy) {
    const RelativeWindow pre_late{-31, -2};
    const RelativeWindow pump{-1, 1};
    const RelativeWindow dump{2, 31};
    const RelativeWindow post{32, 720};

    std::array<RegressionSpec, 5> specs;
    specs[0] = {"(1)", pre_late, {{VarKind::CAT, pre_late}}, policy};
    specs[1] = {"(2)", dump, {{VarKind::CAT, pre_late}}, policy};
    specs[2] = {"(3)",
                dump,
                {{VarKind::CAT, pre_late},
                 {VarKind::CAT, pump},
                 {VarKind::CAR, pre_late},
                 {VarKind::CAR, pump},
                 {VarKind::CAV, pre_late},
                 {VarKind::CAV, pump}},
                policy};
    specs[3] = {"(4)", post, {{VarKind::CAT, pre_late}}, policy};
    specs[4] = {"(5)",
                post,
                {{VarKind::CAT, pre_late},
                 {VarKind::CAT, pump},
                 {VarKind::CAT, dump},
                 {VarKind::CAR, pre_late},
                 {VarKind::CAR, pump},
                 {VarKind::CAR, dump},
                 {VarKind::CAV, pre_late},
                 {VarKind::CAV, pump},
                 {VarKind::CAV, dump}},
                policy};
    return specs;
}

namespace {

struct VarKey {
    VarKind kind;
    int tau1;
    int tau2;
    bool operator<(const VarKey& o) const {
        return std::tie(kind, tau1, tau2) < std::tie(o.kind, o.tau1, o.tau2);
    }
};

}  // namespace

Table3 run_table3(const std::vector<AbnormalPanel>& panels, StandardizePolicy policy,
                  bool robust_se) {
    std::vector<const AbnormalPanel*> usable;
    usable.reserve(panels.size());
    for (const auto& p : panels) {
        if (p.at_defined) usable.push_back(&p);
    }
    const int dropped = static_cast<int>(panels.size() - usable.size());
    if (usable.size() < 20) {
        throw DataError("insufficient events for the cross-sectional regressions: " +
                        std::to_string(usable.size()) + " usable of " +
                        std::to_string(panels.size()));
    }

    const auto specs = table3_specs(policy);

    // Raw per-event cumulative variables, shared across columns.
    std::map<VarKey, std::vector<double>> raw;
    auto raw_values = [&](VarKind kind, RelativeWindow w) -> const std::vector<double>& {
        const VarKey key{kind, w.tau1, w.tau2};
        auto it = raw.find(key);
        if (it != raw.end()) return it->second;
        std::vector<double> v(usable.size());
        for (std::size_t i = 0; i < usable.size(); ++i) {
            const AbnormalPanel& p = *usable[i];
            switch (kind) {
                case VarKind::CAR: v[i] = 100.0 * cumulative(p.ar, w); break;
                case VarKind::CAV: v[i] = cumulative(p.av, w); break;
                case VarKind::CAT: v[i] = cumulative(p.at, w); break;
            }
        }
        return raw.emplace(key, std::move(v)).first->second;
    };

    std::map<VarKey, std::vector<double>> zcache;
    auto standardized = [&](VarKind kind, RelativeWindow w) -> const std::vector<double>& {
        const VarKey key{kind, w.tau1, w.tau2};
        auto it = zcache.find(key);
        if (it != zcache.end()) return it->second;
        auto z = standardize(raw_values(kind, w), term_label(kind, w));
        return zcache.emplace(key, std::move(z)).first->second;
    };

    Table3 out;
    for (std::size_t c = 0; c < specs.size(); ++c) {
        const RegressionSpec& spec = specs[c];
        Table3Column col;
        col.name = term_label(VarKind::CAR, spec.dependent);
        try {
            const std::vector<double>& y = raw_values(VarKind::CAR, spec.dependent);
            std::vector<std::vector<double>> X;
            std::vector<std::string> names;
            X.push_back(std::vector<double>(usable.size(), 1.0));
            names.push_back("Intercept");
            for (const auto& [kind, w] : spec.regressors) {
                const bool zscore =
                    (policy == StandardizePolicy::DepRaw) ? true : (kind != VarKind::CAR);
                X.push_back(zscore ? standardized(kind, w) : raw_values(kind, w));
                names.push_back(term_label(kind, w));
            }
            RegressionResult r = ols(y, X, names, robust_se);
            r.dropped_events = dropped;
            col.result = std::move(r);
        } catch (const Error& e) {
            col.error = e.what();
        }
        out.columns[c] = std::move(col);
    }
    return out;
}

}  // namespace pumpstudy
