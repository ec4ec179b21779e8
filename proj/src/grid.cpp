#include "gel/grid.hpp"

#include <algorithm>

namespace gel {

std::string_view to_string(Boundary bc) {
    switch (bc) {
    case Boundary::periodic: return "periodic";
    case Boundary::fixed_displacement: return "fixed-displacement";
    case Boundary::traction_free: return "traction-free";
    }
    return "?";
}

Boundary boundary_from_string(std::string_view s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "fixed-displacement" || s == "fixed") return Boundary::fixed_displacement;
    if (s == "traction-free") return Boundary::traction_free;
    throw InputError("unknown boundary condition '" + std::string(s) + "'");
}

void GridSpec::validate(int components_per_node) const {
    if (dim != 1 && dim != 2) throw InputError("grid dim must be 1 or 2");
    for (int a = 0; a < dim; ++a) {
        if (n[a] < 8) throw InputError("grid needs at least 8 points per axis (axis " + std::to_string(a) + ")");
        if (!(dx[a] > 0.0)) throw InputError("grid spacing must be positive (axis " + std::to_string(a) + ")");
    }
    if (dt < 0.0) throw InputError("dt must be non-negative (0 selects the stability limit)");
    if (nodes() * static_cast<std::size_t>(std::max(components_per_node, 1)) > memory_budget)
        throw InputError("grid exceeds the configured memory budget");
}

bool Field::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Field::rms() const {
    if (data_.empty()) return 0.0;
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s / static_cast<double>(data_.size()));
}

Field& Field::operator+=(const Field& o) {
    if (!same_shape(o)) throw InputError("field shape mismatch in +=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    if (!same_shape(o)) throw InputError("field shape mismatch in -=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

double max_relative_difference(const Field& a, const Field& b, double floor) {
    if (!a.same_shape(b)) throw InputError("field shape mismatch in comparison");
    const double scale = std::max({a.max_abs(), b.max_abs(), floor});
    double m = 0.0;
    for (std::size_t k = 0; k < a.raw().size(); ++k) m = std::max(m, std::abs(a.raw()[k] - b.raw()[k]));
    return m / scale;
}

}  // namespace gel
