#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pumpstudy/eventstudy.hpp"

namespace pumpstudy {

enum class VarKind { CAT, CAR, CAV };

/// Which regressors get z-scored cross-sectionally. CarRaw (the default)
/// keeps every cumulative-return variable in raw percent and standardizes
/// tweet and volume variables; DepRaw keeps only the dependent raw and
/// standardizes every regressor.
enum class StandardizePolicy { CarRaw, DepRaw };

struct RegressionSpec {
    std::string name;
    RelativeWindow dependent;  // always a cumulative-return window
    std::vector<std::pair<VarKind, RelativeWindow>> regressors;
    StandardizePolicy policy = StandardizePolicy::CarRaw;
};

struct RegressionResult {
    std::vector<std::string> terms;  // intercept first
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;
    double adj_r2 = 0.0;  // may be negative
    double r2 = 0.0;
    int n = 0;
    int dropped_events = 0;
};

/// z = (x - mean) / sample_std. Throws DegenerateError naming the variable on
/// zero variance or fewer than two observations.
std::vector<double> standardize(const std::vector<double>& x, const std::string& name = "x");

/// Ordinary least squares on a design matrix given as columns (intercept
/// column included by the caller). Classical standard errors from
/// s^2 (X'X)^-1 with s^2 = RSS/(n-k); two-sided Student-t p-values with n-k
/// degrees of freedom. With robust_se, HC1 heteroskedasticity-consistent
/// errors replace the classical ones. Throws DegenerateError on rank
/// deficiency, listing the collinear columns.
RegressionResult ols(const std::vector<double>& y, const std::vector<std::vector<double>>& columns,
                     std::vector<std::string> term_names = {}, bool robust_se = false);

/// "***" below 1%, "**" below 5%, "*" below 10%, otherwise empty.
std::string significance_stars(double p);

/// The five cross-sectional specifications: dependents CAR(-31,-2),
/// CAR(2,31) twice, CAR(32,720) twice; columns 3 and 5 add the pump-window
/// and earlier-window controls.
std::array<RegressionSpec, 5> table3_specs(StandardizePolicy policy = StandardizePolicy::CarRaw);

struct Table3Column {
    std::string name;  // dependent variable label
    std::optional<RegressionResult> result;
    std::string error;  // non-empty when the column failed
};

struct Table3 {
    std::array<Table3Column, 5> columns;
};

/// Build the per-event cumulative variables from the panels (returns in
/// percent; tweet/volume variables standardized per policy) and run the five
/// specifications. Events without a defined tweet deviation are dropped from
/// every column and counted in dropped_events. A failing column is reported
/// in place without aborting the others. Throws DataError below 20 usable
/// panels.
Table3 run_table3(const std::vector<AbnormalPanel>& panels,
                  StandardizePolicy policy = StandardizePolicy::CarRaw, bool robust_se = false);

std::string var_kind_name(VarKind k);
std::string term_label(VarKind k, RelativeWindow w);

}  // namespace pumpstudy
