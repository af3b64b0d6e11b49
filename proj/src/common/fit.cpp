#include "response/common/fit.hpp"

#include <cmath>
#include <vector>

#include "response/common/error.hpp"

namespace response {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InputError("fit_line: x and y differ in length");
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) throw InputError("fit_line: need at least two points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw InputError("fit_line: degenerate abscissae");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.points = static_cast<int>(x.size());
    return fit;
}

LinearFit fit_geometric(std::span<const double> values) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0.0 && std::isfinite(values[i])) {
            xs.push_back(static_cast<double>(i));
            ys.push_back(std::log(values[i]));
        }
    }
    return fit_line(xs, ys);
}

}  // namespace response
