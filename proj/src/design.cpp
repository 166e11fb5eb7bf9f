#include "lpglm/design.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "lpglm/errors.hpp"

namespace lpglm {

namespace {
std::string fmt_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}
}  // namespace

void DesignSpec::validate() const {
    if (trend_scale && !(*trend_scale > 0.0)) throw ConfigError("trend_scale must be positive");
    std::set<double> seen;
    for (const auto& h : harmonics) {
        if (!(h.period > 0.0)) throw ConfigError("harmonic periods must be positive");
        if (!seen.insert(h.period).second) throw ConfigError("duplicate harmonic period " + fmt_num(h.period));
        if (h.multipliers.empty()) throw ConfigError("harmonic period " + fmt_num(h.period) + " has no multipliers");
        std::set<int> ks;
        for (int k : h.multipliers) {
            if (k < 1) throw ConfigError("harmonic multipliers must be >= 1");
            if (!ks.insert(k).second) throw ConfigError("duplicate harmonic multiplier");
        }
    }
    std::set<std::string> names;
    for (const auto& c : columns)
        if (!names.insert(c).second) throw ConfigError("duplicate covariate column '" + c + "'");
}

std::vector<std::string> DesignSpec::column_names() const {
    std::vector<std::string> out{"intercept"};
    if (include_trend) out.push_back("trend");
    for (const auto& h : harmonics) {
        for (int k : h.multipliers) {
            out.push_back("cos(2pi*" + std::to_string(k) + "t/" + fmt_num(h.period) + ")");
            out.push_back("sin(2pi*" + std::to_string(k) + "t/" + fmt_num(h.period) + ")");
        }
    }
    for (const auto& c : columns) out.push_back(c);
    return out;
}

Eigen::MatrixXd build_design(std::size_t n, const DesignSpec& spec,
                             const std::vector<std::vector<double>>& extra) {
    spec.validate();
    if (n < 1) throw ConfigError("build_design: n must be >= 1");
    if (extra.size() != spec.columns.size()) throw ConfigError("build_design: explicit column count mismatch");
    Eigen::Index p = 1 + (spec.include_trend ? 1 : 0) + static_cast<Eigen::Index>(extra.size());
    for (const auto& h : spec.harmonics) p += 2 * static_cast<Eigen::Index>(h.multipliers.size());

    const auto rows = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd X(rows, p);
    const double scale = spec.trend_scale.value_or(static_cast<double>(n));
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double t = static_cast<double>(r + 1);
        Eigen::Index c = 0;
        X(r, c++) = 1.0;
        if (spec.include_trend) X(r, c++) = t / scale;
        for (const auto& h : spec.harmonics) {
            for (int k : h.multipliers) {
                const double angle = 2.0 * std::numbers::pi * k * t / h.period;
                X(r, c++) = std::cos(angle);
                X(r, c++) = std::sin(angle);
            }
        }
        for (const auto& col : extra) {
            if (col.size() != n) throw ConfigError("build_design: explicit column has the wrong length");
            X(r, c++) = col[static_cast<std::size_t>(r)];
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) throw ConfigError("build_design: design columns are linearly dependent");
    return X;
}

Eigen::MatrixXd build_design(std::size_t n, const DesignSpec& spec) {
    if (!spec.columns.empty()) throw ConfigError("build_design: explicit columns need data");
    return build_design(n, spec, {});
}

}  // namespace lpglm
