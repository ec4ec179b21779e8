#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gel {

/// Thrown for malformed inputs (shape mismatch, invalid grid, missing members).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Boundary { periodic, fixed_displacement, traction_free };

std::string_view to_string(Boundary bc);
Boundary boundary_from_string(std::string_view s);

/// Uniform Cartesian grid in one or two spatial dimensions.
///
/// Nodes sit at x = i*dx along each axis. Under periodic boundaries the
/// domain length is n*dx; otherwise it is (n-1)*dx. Node index is i + n0*j.
struct GridSpec {
    int dim = 1;
    std::array<int, 2> n{8, 1};
    std::array<double, 2> dx{1.0, 1.0};
    double dt = 0.0;
    int n_steps = 0;
    Boundary bc = Boundary::periodic;
    /// Upper bound on stored doubles (nodes * components) accepted by validate().
    std::size_t memory_budget = std::size_t{1} << 28;

    std::size_t nodes() const { return static_cast<std::size_t>(n[0]) * (dim == 2 ? n[1] : 1); }
    std::size_t index(int i, int j = 0) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(n[0]) * j; }
    int axis_index(std::size_t node, int axis) const {
        return axis == 0 ? static_cast<int>(node % n[0]) : static_cast<int>(node / n[0]);
    }
    double coord(std::size_t node, int axis) const { return axis_index(node, axis) * dx[axis]; }
    double length(int axis) const { return (bc == Boundary::periodic ? n[axis] : n[axis] - 1) * dx[axis]; }
    double cell_volume() const { return dim == 2 ? dx[0] * dx[1] : dx[0]; }

    /// Throws InputError on n < 8, non-positive spacing or an oversize request.
    void validate(int components_per_node = 1) const;
};

/// Number of scalar entries of a rank-`rank` tensor in `dim` dimensions.
constexpr int tensor_size(int dim, int rank) {
    int s = 1;
    for (int r = 0; r < rank; ++r) s *= dim;
    return s;
}

// Row-major flattening of full-index tensors; index order is documented in
// docs/field_format.md and is the column order of the CSV exchange format.
constexpr int idx2(int d, int i, int j) { return i * d + j; }
constexpr int idx3(int d, int i, int j, int k) { return (i * d + j) * d + k; }
constexpr int idx4(int d, int i, int j, int k, int l) { return ((i * d + j) * d + k) * d + l; }

/// Component-major storage of a multi-component nodal field.
class Field {
public:
    Field() = default;
    Field(int components, std::size_t nodes, double value = 0.0)
        : ncomp_(components), nodes_(nodes), data_(static_cast<std::size_t>(components) * nodes, value) {}

    int components() const { return ncomp_; }
    std::size_t nodes() const { return nodes_; }
    bool empty() const { return data_.empty(); }

    double& operator()(int c, std::size_t node) { return data_[static_cast<std::size_t>(c) * nodes_ + node]; }
    double operator()(int c, std::size_t node) const { return data_[static_cast<std::size_t>(c) * nodes_ + node]; }

    std::span<double> component(int c) { return {data_.data() + static_cast<std::size_t>(c) * nodes_, nodes_}; }
    std::span<const double> component(int c) const {
        return {data_.data() + static_cast<std::size_t>(c) * nodes_, nodes_};
    }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    bool same_shape(const Field& o) const { return ncomp_ == o.ncomp_ && nodes_ == o.nodes_; }
    bool all_finite() const;
    double max_abs() const;
    double rms() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);

    bool operator==(const Field& o) const = default;

private:
    int ncomp_ = 0;
    std::size_t nodes_ = 0;
    std::vector<double> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Max |a-b| / max(|a|, floor); used for the relative wavefield comparisons.
double max_relative_difference(const Field& a, const Field& b, double floor = 1e-300);

}  // namespace gel
