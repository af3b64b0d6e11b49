#pragma once

#include <span>

namespace response {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points = 0;
};

/// Ordinary least squares y ≈ intercept + slope·x.  R² is 1 for an exact
/// fit and for a constant y (zero total variance).
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fits log(values[i]) ≈ c + i·log(rate) over the strictly positive
/// entries; `slope` of the result is log(rate).
LinearFit fit_geometric(std::span<const double> values);

}  // namespace response
