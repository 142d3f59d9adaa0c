#include "liferec/matrix.hpp"

#include <cmath>

namespace liferec {

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
}

double Matrix::stddev() const {
    if (data_.empty()) return 0.0;
    double mean = 0.0;
    for (double v : data_) mean += v;
    mean /= static_cast<double>(data_.size());
    double var = 0.0;
    for (double v : data_) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(data_.size()));
}

}  // namespace liferec
