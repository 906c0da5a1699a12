#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nullctl/expression.hpp"
#include "nullctl/matrix.hpp"

namespace nullctl {

// Autonomous vector field f: R^n -> R^n with symbolic first and second derivatives.
class VectorField {
  public:
    VectorField() = default;

    // Components are parsed over x1..xn with n = components.size().
    [[nodiscard]] static VectorField parse(std::span<const std::string> components);

    explicit VectorField(std::vector<Expression> components);

    [[nodiscard]] std::size_t dimension() const noexcept { return components_.size(); }
    [[nodiscard]] const Expression& component(std::size_t i) const { return components_.at(i); }

    [[nodiscard]] Vector eval(std::span<const double> x) const;
    [[nodiscard]] Matrix jacobian(std::span<const double> x) const;
    [[nodiscard]] Matrix hessian(std::size_t component, std::span<const double> x) const;

    // Variables on which some second partial of the component depends, or that
    // appear in a non-zero second partial. Empty when the Hessian is constant.
    [[nodiscard]] std::vector<std::size_t> hessian_support(std::size_t component) const;
    [[nodiscard]] bool hessian_is_constant(std::size_t component) const;
    [[nodiscard]] bool is_affine() const;

    // g(x) = f(x + offset)
    [[nodiscard]] VectorField shifted(std::span<const double> offset) const;

  private:
    void build_derivatives();

    std::vector<Expression> components_;
    std::vector<std::vector<Expression>> first_;               // first_[i][j] = d f_i / d x_j
    std::vector<std::vector<std::vector<Expression>>> second_; // second_[i][j][k], k <= j
};

// Axis-aligned box, one [lo, hi] pair per state variable.
struct Box {
    std::vector<std::pair<double, double>> bounds;

    [[nodiscard]] static Box symmetric(std::size_t n, double half_width);
    [[nodiscard]] std::size_t dimension() const noexcept { return bounds.size(); }
    [[nodiscard]] bool contains(std::span<const double> x) const;
    [[nodiscard]] Box scaled(double factor) const;
    [[nodiscard]] Box translated(std::span<const double> offset) const;
};

struct RemainderOptions {
    std::size_t points_per_axis = 201;
    // Upper limit on Hessian evaluations per component; points per axis shrink to fit.
    std::size_t max_points = 1'000'000;
    double safety_factor = 1.05;
    bool refine = true;
    std::optional<double> override_value;
};

// sup over the box of the Hessian spectral norm of one component, estimated
// on the grid and refined by a bounded pattern search.
[[nodiscard]] double hessian_norm_sup(const VectorField& f, std::size_t component, const Box& box,
                                      const RemainderOptions& options = {});

// c_R with |f(a) - f(0) - Df(0) a| <= c_R |a|^2 on the box.
[[nodiscard]] double remainder_coefficient(const VectorField& f, const Box& box, const RemainderOptions& options = {});

} // namespace nullctl
