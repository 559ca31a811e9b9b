#pragma once
// Grids on [-1,1], fields sampled on them, smooth quadrature and the exact
// log-kernel panel moment.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hlmf {

enum class GridKind { chebyshev_lobatto, graded_composite };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& s);

// Nodes first .. first+count-1 interpolate on [a, b].
struct Panel {
    double a = 0.0;
    double b = 0.0;
    std::size_t first = 0;
    std::size_t count = 0;
    bool touches_boundary() const { return a == -1.0 || b == 1.0; }
};

struct Grid {
    GridKind kind = GridKind::graded_composite;
    std::size_t n = 0;
    double grading = 0.5;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<Panel> panels;
    std::vector<double> bary;  // barycentric weights, stored per node

    // panel whose closed interval contains x (|x| <= 1); x = 0 maps right
    std::size_t panel_of(double x) const;
    std::vector<double> breakpoints() const;
    // local node spacing near x
    double spacing_at(double x) const;
    // index of the node equal to x, or npos
    std::size_t node_index(double x) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

using GridPtr = std::shared_ptr<const Grid>;

// graded_composite: n must be a multiple of 16 with n >= 32; each half gets
// n/16 panels of 8 right-Radau nodes, half of them geometric toward 0 and
// half toward the endpoint, ratio `grading`.
GridPtr build_grid(std::size_t n, GridKind kind, double grading = 0.5);
// Composite grid from breakpoints of [0,1] (0 and 1 included), mirrored.
GridPtr build_composite_grid(const std::vector<double>& half_breaks, std::size_t order = 8);

// Sampled function with exterior value 0. Off-node evaluation goes through
// an attached evaluator when present (solutions carry their Nystrom
// interpolant), otherwise through the panel interpolant.
class Field {
public:
    Field() = default;
    Field(GridPtr grid, std::vector<double> values);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    std::size_t size() const { return values_.size(); }

    double operator()(double x) const;
    // Like operator() but never shortcuts to stored node values, so a
    // Nystrom solution is evaluated as one smooth function.
    double smooth(double x) const;
    void set_evaluator(std::function<double(double)> eval) { eval_ = std::move(eval); }
    bool has_evaluator() const { return static_cast<bool>(eval_); }

private:
    GridPtr grid_;
    std::vector<double> values_;
    std::function<double(double)> eval_;
};

double integrate(const Grid& grid, std::span<const double> values);
double integrate(const Field& f);

// int_a^b log(1/|x - y|) dy
double log_moment(double a, double b, double x);

// Panel interpolant; exact at nodes, 0 for |x| >= 1.
double interpolate(const Field& f, double x);
// Derivative of the panel interpolant.
double interpolate_derivative(const Field& f, double x);

}  // namespace hlmf
